//! Per-prefix bookkeeping shared by the scan and binary threshold kernels.
//!
//! A row describes one prefix A_i of a sampled sequence: which leftover
//! elements still fit the budget, which of those clear the density threshold,
//! and how much negative marginal mass has shown up. The two stopping rules
//! read only the row aggregates, so the fast kernels and the materialized
//! reference tables share the exact same predicates.

use crate::oracle::ElementId;

/// Why a prefix was accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trigger {
    /// Cost rule fired: the survivors are worth at most (1-eps) of the pool.
    Cost,
    /// Value rule fired: negative mass outweighs eps times the survivor gain.
    Value,
    /// Cost rule fired with no survivors at all; the pool is used up.
    Exhausted,
}

/// Aggregates for one prefix A_i (1-based index i).
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixRow {
    /// X_i: leftover elements that still fit after A_i, in pool order.
    pub fit: Vec<ElementId>,
    /// G_i: members of X_i whose marginal clears tau * cost.
    pub good: Vec<ElementId>,
    /// c(G_i), accumulated in pool order.
    pub good_cost: f64,
    /// sum of marginals over G_i, accumulated in pool order.
    pub good_gain: f64,
    /// sum of |marginal| over E_i. Scan rules take E_i inside X_i; binary
    /// rules take E_i over the whole leftover pool.
    pub negative_loss: f64,
    /// Binary rules only: sum of |f(a_t | S u A_{t-1})| over prefix members
    /// whose own chain marginal was negative.
    pub prefix_negative_loss: f64,
    /// f(S u A_i).
    pub prefix_value: f64,
}

/// Materialized rows 1..=d for one while-iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixTable {
    pub rows: Vec<PrefixRow>,
    /// c(X) of the pool the sequence was drawn from.
    pub pool_cost: f64,
    /// f(S) before this iteration.
    pub base_value: f64,
}

impl PrefixTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Row for prefix length i (1-based).
    pub fn row(&self, i: usize) -> &PrefixRow {
        &self.rows[i - 1]
    }
}

/// Cost rule: c(G_i) <= (1-eps) * c(X).
pub fn cost_triggered(good_cost: f64, eps: f64, pool_cost: f64) -> bool {
    good_cost <= (1.0 - eps) * pool_cost
}

/// Value rule: eps * sum_G f <= loss, with the convention that zero loss
/// never triggers (otherwise an empty survivor set would count as damage).
pub fn value_triggered(good_gain: f64, eps: f64, loss: f64) -> bool {
    loss > 0.0 && eps * good_gain <= loss
}

/// Scan-rule loss for a row: negatives inside X_i only.
pub fn scan_loss(row: &PrefixRow) -> f64 {
    row.negative_loss
}

/// Binary-rule loss for a row: negatives across the leftover pool plus the
/// prefix's own negative chain marginals.
pub fn binary_loss(row: &PrefixRow) -> f64 {
    row.negative_loss + row.prefix_negative_loss
}

/// First-trigger indices over a materialized table with the scan rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cutoff {
    /// i*: first row where the cost rule holds. The last row always
    /// qualifies, because nothing is left over once the sequence stops.
    pub cost_index: usize,
    /// j*: first row where the value rule holds, if any.
    pub value_index: Option<usize>,
    /// k* = min(i*, j*).
    pub cutoff: usize,
    pub trigger: Trigger,
}

/// Scan rules over a full table: i*, j*, and k* = min. Ties go to the cost
/// rule, so the trigger counter stays conservative.
pub fn find_cutoff(table: &PrefixTable, eps: f64) -> Cutoff {
    debug_assert!(!table.is_empty());
    let mut cost_index = None;
    let mut value_index = None;
    for (idx, row) in table.rows.iter().enumerate() {
        let i = idx + 1;
        if cost_index.is_none() && cost_triggered(row.good_cost, eps, table.pool_cost) {
            cost_index = Some(i);
        }
        if value_index.is_none() && value_triggered(row.good_gain, eps, scan_loss(row)) {
            value_index = Some(i);
        }
        if cost_index.is_some() && value_index.is_some() {
            break;
        }
    }
    let cost_index = cost_index.expect("cost rule must hold once the sequence is exhausted");
    let (cutoff, trigger) = match value_index {
        Some(j) if j < cost_index => (j, Trigger::Value),
        _ => {
            let row = table.row(cost_index);
            let t = if row.good.is_empty() { Trigger::Exhausted } else { Trigger::Cost };
            (cost_index, t)
        }
    };
    Cutoff { cost_index, value_index, cutoff, trigger }
}

/// Binary rules over a full table by ascending scan: the reference answer the
/// binary search must reproduce. Returns (k*, flag) where flag says the value
/// rule fired at k* without the cost rule.
pub fn find_cutoff_binary_rules(table: &PrefixTable, eps: f64) -> (usize, bool) {
    for (idx, row) in table.rows.iter().enumerate() {
        let c1 = cost_triggered(row.good_cost, eps, table.pool_cost);
        let c2 = value_triggered(row.good_gain, eps, binary_loss(row));
        if c1 || c2 {
            return (idx + 1, c2 && !c1);
        }
    }
    unreachable!("cost rule must hold at the final prefix");
}

/// Outcome of the probing binary search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarySearchOutcome {
    pub cutoff: usize,
    /// Value-rule-only flag evaluated at the accepted prefix.
    pub flag: bool,
    /// Probed indices in order; the caller pays one adaptive round each.
    pub probed: Vec<usize>,
}

/// Binary search for the first index in 1..=d where either rule holds, given
/// that both rules stay true once they turn true. `probe(i)` returns
/// (cost rule, value rule) at prefix i. The flag is taken at the accepted
/// index; if the search never probed it, one extra probe is spent, matching
/// the counter semantics of the ascending scan.
pub fn binary_search_cutoff<P>(d: usize, mut probe: P) -> BinarySearchOutcome
where
    P: FnMut(usize) -> (bool, bool),
{
    debug_assert!(d >= 1);
    let mut lo = 1usize;
    let mut hi = d;
    let mut probed = Vec::new();
    let mut at_hi: Option<(bool, bool)> = None;
    while lo < hi {
        let mid = (lo + hi) / 2;
        let (c1, c2) = probe(mid);
        probed.push(mid);
        if c1 || c2 {
            hi = mid;
            at_hi = Some((c1, c2));
        } else {
            lo = mid + 1;
        }
    }
    // `at_hi` is rewritten exactly when `hi` moves, so it always carries the
    // conditions at the current `hi`. None means `hi` is still the untouched
    // upper end and needs its own probe.
    let (c1, c2) = match at_hi {
        Some(conds) => conds,
        None => {
            let conds = probe(hi);
            probed.push(hi);
            conds
        }
    };
    BinarySearchOutcome { cutoff: hi, flag: c2 && !c1, probed }
}

/// True when both binary-rule conditions are monotone over the table: once
/// true at some prefix, true at every longer prefix.
pub fn check_bin_monotonicity(table: &PrefixTable, eps: f64) -> bool {
    let mut seen_c1 = false;
    let mut seen_c2 = false;
    for row in &table.rows {
        let c1 = cost_triggered(row.good_cost, eps, table.pool_cost);
        let c2 = value_triggered(row.good_gain, eps, binary_loss(row));
        if seen_c1 && !c1 {
            return false;
        }
        if seen_c2 && !c2 {
            return false;
        }
        seen_c1 = c1;
        seen_c2 = c2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn row(good_cost: f64, good_gain: f64, neg: f64, prefix_neg: f64) -> PrefixRow {
        PrefixRow {
            fit: Vec::new(),
            good: vec![0],
            good_cost,
            good_gain,
            negative_loss: neg,
            prefix_negative_loss: prefix_neg,
            prefix_value: 0.0,
        }
    }

    fn table(rows: Vec<PrefixRow>, pool_cost: f64) -> PrefixTable {
        PrefixTable { rows, pool_cost, base_value: 0.0 }
    }

    #[test]
    fn no_negatives_means_no_value_trigger() {
        // Zero loss on both sides must not fire even though 0 <= 0.
        assert!(!value_triggered(0.0, 0.25, 0.0));
        assert!(value_triggered(0.0, 0.25, 1e-12));
        assert!(!value_triggered(4.0, 0.25, 0.5));
        assert!(value_triggered(2.0, 0.25, 0.5));
    }

    #[test]
    fn cutoff_picks_earlier_rule_and_ties_go_to_cost() {
        // Row 1: nothing fires. Row 2: value only. Row 3: cost.
        let t = table(
            vec![
                row(10.0, 8.0, 0.0, 0.0),
                row(9.0, 8.0, 4.0, 0.0),
                row(1.0, 8.0, 4.0, 0.0),
            ],
            10.0,
        );
        let cut = find_cutoff(&t, 0.5);
        assert_eq!(cut.cost_index, 3);
        assert_eq!(cut.value_index, Some(2));
        assert_eq!(cut.cutoff, 2);
        assert_eq!(cut.trigger, Trigger::Value);

        // Both fire on the same row: counted as cost.
        let t = table(vec![row(10.0, 8.0, 0.0, 0.0), row(1.0, 8.0, 4.0, 0.0)], 10.0);
        let cut = find_cutoff(&t, 0.5);
        assert_eq!(cut.cutoff, 2);
        assert_eq!(cut.trigger, Trigger::Cost);
    }

    #[test]
    fn exhausted_marks_an_empty_survivor_set() {
        let mut last = row(0.0, 0.0, 0.0, 0.0);
        last.good = Vec::new();
        let t = table(vec![row(10.0, 8.0, 0.0, 0.0), last], 10.0);
        let cut = find_cutoff(&t, 0.5);
        assert_eq!(cut.cutoff, 2);
        assert_eq!(cut.trigger, Trigger::Exhausted);
    }

    #[test]
    fn binary_search_matches_linear_scan_on_random_monotone_tables() {
        let mut r = ChaCha8Rng::seed_from_u64(0x70726566);
        for case in 0..1000 {
            let d = r.random_range(1..=40);
            // Draw monotone rule profiles directly: c1 turns true at some
            // index <= d (always true at d), c2 at some index or never.
            let c1_at = r.random_range(1..=d);
            let c2_at = if r.random_bool(0.5) { Some(r.random_range(1..=d + 3)) } else { None };
            let rows: Vec<PrefixRow> = (1..=d)
                .map(|i| {
                    // Encode the profiles through the real predicates:
                    // pool_cost 1, eps 1/2, so cost fires iff good_cost <= 1/2.
                    let good_cost = if i >= c1_at { 0.25 } else { 0.75 };
                    let (gain, loss) = match c2_at {
                        Some(j) if i >= j => (1.0, 1.0),
                        _ => (1.0, 0.25),
                    };
                    row(good_cost, gain, loss, 0.0)
                })
                .collect();
            let t = table(rows, 1.0);
            assert!(check_bin_monotonicity(&t, 0.5), "case {case}");
            let (k_lin, flag_lin) = find_cutoff_binary_rules(&t, 0.5);
            let out = binary_search_cutoff(d, |i| {
                let row = t.row(i);
                (
                    cost_triggered(row.good_cost, 0.5, t.pool_cost),
                    value_triggered(row.good_gain, 0.5, binary_loss(row)),
                )
            });
            assert_eq!(out.cutoff, k_lin, "case {case}");
            assert_eq!(out.flag, flag_lin, "case {case}");
            assert!(out.probed.len() <= (usize::BITS - d.leading_zeros()) as usize + 1);
        }
    }

    #[test]
    fn binary_search_probes_the_accepted_index_when_needed() {
        // d = 1: no loop probes happen, the answer must still be evaluated.
        let mut probes = Vec::new();
        let out = binary_search_cutoff(1, |i| {
            probes.push(i);
            (false, true)
        });
        assert_eq!(out.cutoff, 1);
        assert!(out.flag);
        assert_eq!(probes, vec![1]);

        // All probes false: the search settles on d without touching it.
        let t = table(
            vec![row(0.75, 1.0, 0.25, 0.0), row(0.75, 1.0, 0.25, 0.0), row(0.25, 1.0, 1.0, 0.0)],
            1.0,
        );
        let out = binary_search_cutoff(3, |i| {
            let row = t.row(i);
            (
                cost_triggered(row.good_cost, 0.5, t.pool_cost),
                value_triggered(row.good_gain, 0.5, binary_loss(row)),
            )
        });
        assert_eq!(out.cutoff, 3);
        // Cost and value both hold at 3; ties go to cost, so no flag.
        assert!(!out.flag);
        assert_eq!(out.probed, vec![2, 3]);
    }

    #[test]
    fn monotonicity_check_spots_a_flap() {
        let t = table(vec![row(0.25, 1.0, 1.0, 0.0), row(0.75, 1.0, 0.25, 0.0)], 1.0);
        assert!(!check_bin_monotonicity(&t, 0.5));
    }
}
