use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::oracle::ElementId;

/// One random feasible sequence: elements drawn uniformly from the shrinking
/// candidate pool, keeping only elements that still fit the budget after each
/// draw. Issues zero value queries; consumes rng only.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSequence {
    /// Drawn order a_1..a_d.
    pub order: Vec<ElementId>,
    /// cumulative[i] = c(S) + c(a_1..a_{i+1}), accumulated in draw order.
    /// Every downstream budget test must reuse these exact sums.
    pub cumulative: Vec<f64>,
}

impl SampledSequence {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// c(S ∪ A_i); i = 0 gives the base cost back.
    pub fn cost_through(&self, i: usize, base: f64) -> f64 {
        if i == 0 {
            base
        } else {
            self.cumulative[i - 1]
        }
    }
}

/// Draw a feasible sequence from `pool` on top of a partial solution of total
/// cost `base_cost` (the accumulated c(S)). `in_solution` marks solution
/// members for the disjointness contract.
pub fn sample_sequence(
    pool: &[ElementId],
    in_solution: &[bool],
    base_cost: f64,
    costs: &[f64],
    budget: f64,
    rng: &mut ChaCha8Rng,
) -> Result<SampledSequence> {
    if base_cost > budget {
        return Err(Error::contract(
            "sample_sequence",
            format!("solution cost {base_cost} already exceeds budget {budget}"),
        ));
    }
    for &x in pool {
        if in_solution[x] {
            return Err(Error::contract(
                "sample_sequence",
                format!("element {x} is both in the pool and the solution"),
            ));
        }
        if costs[x] + base_cost > budget {
            return Err(Error::contract(
                "sample_sequence",
                format!("pool element {x} cannot fit the remaining budget"),
            ));
        }
    }
    let mut live: Vec<ElementId> = pool.to_vec();
    let mut order = Vec::new();
    let mut cumulative = Vec::new();
    let mut acc = base_cost;
    while !live.is_empty() {
        let pick = rng.random_range(0..live.len());
        let a = live.swap_remove(pick);
        acc += costs[a];
        order.push(a);
        cumulative.push(acc);
        live.retain(|&x| costs[x] + acc <= budget);
    }
    Ok(SampledSequence { order, cumulative })
}
