//! Exhaustive optimum for small instances. Ground truth for the approximation
//! ratios the acceptance checks quote.

use anyhow::bail;

use parsub_core::instances::{ConstraintKind, Instance};
use parsub_core::oracle::{ElementId, SetFunction};

/// Largest ground set we will enumerate. 2^22 evaluations is already minutes
/// of work on the slower objectives; past that the oracle stops being useful.
pub const BRUTE_CAP: usize = 22;

/// Enumerates every feasible subset of the active elements and returns the
/// best value with the lexicographically least witness among the maximizers.
pub fn brute_force_opt<F: SetFunction>(inst: &Instance<F>) -> anyhow::Result<(f64, Vec<ElementId>)> {
    let active = inst.active();
    let m = active.len();
    if m > BRUTE_CAP {
        bail!("brute force capped at {BRUTE_CAP} active elements, instance has {m}");
    }
    let f = inst.objective();
    let k_cap = match inst.kind() {
        ConstraintKind::Cardinality { k } => Some(k as u32),
        ConstraintKind::Knapsack => None,
    };

    let mut best_value = f.value(&[]);
    let mut best_set: Vec<ElementId> = Vec::new();
    let mut members = Vec::with_capacity(m);
    for mask in 1u64..(1u64 << m) {
        if let Some(k) = k_cap {
            if mask.count_ones() > k {
                continue;
            }
        }
        members.clear();
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            members.push(active[i]);
            bits &= bits - 1;
        }
        if !inst.is_feasible(&members) {
            continue;
        }
        let v = f.value(&members);
        if v > best_value || (v == best_value && members < best_set) {
            best_value = v;
            best_set = members.clone();
        }
    }
    Ok((best_value, best_set))
}
