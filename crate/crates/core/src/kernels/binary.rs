//! Threshold sampling with a probing binary search per iteration.
//!
//! The binary variant redefines the negative-marginal rule so that both
//! stopping rules are monotone along the sequence: negatives are collected
//! over the whole leftover pool, plus the prefix's own negative chain
//! marginals. The accepted prefix can then be found with O(log d) probes,
//! each one adaptive round of |X| - i marginals plus any chain values not yet
//! priced. A final pruning pass drops solution members whose chain marginal
//! was not positive; it costs one more round of at most |S| queries.

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernels::prefix::{
    binary_search_cutoff, cost_triggered, value_triggered, Trigger,
};
use crate::kernels::sample::sample_sequence;
use crate::kernels::scan::{
    cost_spread_of, density_filter, validate_pool, IterationRecord, ThreshOutcome, ThreshParams,
    ValueRule,
};
use crate::oracle::{Cursor, ElementId, Oracle, QueryLedger, SetFunction};

struct ProbeRow {
    good: Vec<ElementId>,
    good_cost: f64,
}

/// Subset-sum comparisons allow one ulp-scale slack.
const TOL: f64 = 1e-9;

pub fn threshold_binary<'f, F: SetFunction>(
    oracle: &Oracle<'f, F>,
    pool: &[ElementId],
    costs: &[f64],
    params: &ThreshParams,
    ledger: &mut QueryLedger,
    rng: &mut ChaCha8Rng,
) -> Result<ThreshOutcome> {
    params.validate()?;
    let n = oracle.ground().len();
    validate_pool(pool, costs, n, params.budget)?;
    let entry = ledger.snapshot();

    let (admitted, admitted_cost) = density_filter(oracle, pool, costs, params.tau, ledger)?;
    let mut live = admitted.clone();
    let mut live_cost = admitted_cost;
    let kappa = cost_spread_of(&live, costs);
    let check_value = params.value_rule == ValueRule::Enabled;

    let mut solution: Vec<ElementId> = Vec::new();
    let mut solution_marginals: Vec<f64> = Vec::new();
    let mut in_solution = vec![false; n];
    let mut solution_cost = 0.0f64;
    let mut run_cursor = oracle.inner().cursor();
    let mut current_value = run_cursor.value();
    let mut base_value_charged = false;
    let mut triggers = 0u64;
    let mut trace: Vec<IterationRecord> = Vec::new();
    let mut seq_position = vec![usize::MAX; n];

    while !live.is_empty() && (!check_value || triggers < params.max_triggers) {
        let seq =
            sample_sequence(&live, &in_solution, solution_cost, costs, params.budget, rng)?;
        let d = seq.len();
        for (t, &a) in seq.order.iter().enumerate() {
            seq_position[a] = t + 1;
        }

        // Chain values f(S u A_t) priced lazily up to the deepest probe.
        let mut chain_vals: Vec<f64> = vec![current_value];
        let mut chain_neg: Vec<f64> = vec![0.0];
        let mut chain_cursor = run_cursor.clone();
        let mut snapshots: Vec<(usize, F::Cursor<'f>)> = vec![(0, run_cursor.clone())];
        let mut probe_rows: Vec<(usize, ProbeRow)> = Vec::new();
        let mut failure: Option<Error> = None;

        let outcome = binary_search_cutoff(d, |i: usize| {
            if failure.is_some() {
                return (true, false);
            }
            let mut fresh_chain = 0u64;
            while chain_vals.len() <= i {
                let t = chain_vals.len();
                chain_cursor.insert(seq.order[t - 1]);
                let v = chain_cursor.value();
                if !v.is_finite() {
                    failure = Some(Error::NonFinite {
                        context: format!("prefix value at depth {t}"),
                    });
                    return (true, false);
                }
                let m = v - chain_vals[t - 1];
                chain_neg.push(chain_neg[t - 1] + if m < 0.0 { -m } else { 0.0 });
                chain_vals.push(v);
                fresh_chain += 1;
            }

            // Position a cursor at S u A_i, growing the nearest snapshot.
            let (from, base) = snapshots
                .iter()
                .filter(|(p, _)| *p <= i)
                .max_by_key(|(p, _)| *p)
                .map(|(p, c)| (*p, c))
                .expect("snapshot at prefix 0 always exists");
            let mut cur = base.clone();
            let mut pos = from;
            while pos < i {
                cur.insert(seq.order[pos]);
                pos += 1;
            }

            let cum = seq.cost_through(i, solution_cost);
            let mut good: Vec<ElementId> = Vec::new();
            let mut good_cost = 0.0f64;
            let mut good_gain = 0.0f64;
            let mut loss = 0.0f64;
            let mut priced = 0u64;
            for &x in &live {
                if seq_position[x] <= i {
                    continue;
                }
                priced += 1;
                let m = cur.marginal(x);
                if !m.is_finite() {
                    failure = Some(Error::NonFinite {
                        context: format!("marginal of element {x}"),
                    });
                    return (true, false);
                }
                if m < 0.0 {
                    loss += -m;
                }
                if costs[x] + cum <= params.budget && m >= params.tau * costs[x] {
                    good.push(x);
                    good_cost += costs[x];
                    good_gain += m;
                }
            }
            debug_assert_eq!(priced as usize, live.len() - i);

            let c1 = cost_triggered(good_cost, params.eps, live_cost);
            let c2 = check_value && value_triggered(good_gain, params.eps, loss + chain_neg[i]);

            let base_charge = if base_value_charged { 0 } else { 1 };
            base_value_charged = true;
            if let Err(e) = ledger.charge_batch(priced + fresh_chain + base_charge) {
                failure = Some(e);
                return (true, false);
            }
            snapshots.push((i, cur));
            probe_rows.push((i, ProbeRow { good, good_cost }));
            (c1, c2)
        });
        for &a in &seq.order {
            seq_position[a] = usize::MAX;
        }
        if let Some(e) = failure {
            return Err(e);
        }

        let cutoff = outcome.cutoff;
        let row_at = probe_rows
            .iter()
            .position(|(p, _)| *p == cutoff)
            .expect("the accepted prefix is always probed");
        let (_, row) = probe_rows.swap_remove(row_at);
        let trigger = if outcome.flag {
            Trigger::Value
        } else if row.good.is_empty() {
            Trigger::Exhausted
        } else {
            Trigger::Cost
        };

        trace.push(IterationRecord {
            pool_size: live.len(),
            pool_cost: live_cost,
            sequence_len: d,
            cutoff,
            trigger,
            kept: row.good.len(),
        });
        for t in 1..=cutoff {
            let a = seq.order[t - 1];
            solution.push(a);
            in_solution[a] = true;
            solution_marginals.push(chain_vals[t] - chain_vals[t - 1]);
        }
        solution_cost = seq.cumulative[cutoff - 1];
        current_value = chain_vals[cutoff];
        let snap_at = snapshots
            .iter()
            .position(|(p, _)| *p == cutoff)
            .expect("the accepted prefix has a snapshot");
        run_cursor = snapshots.swap_remove(snap_at).1;
        live = row.good;
        live_cost = row.good_cost;
        if outcome.flag {
            triggers += 1;
        }
    }

    // Final pruning: keep members whose chain marginal was strictly positive.
    // The marginals were priced during the probes; the pass itself is one
    // round over the solution so the adaptivity cost stays explicit.
    let preliminary = solution.clone();
    ledger.charge_batch(solution.len() as u64)?;
    let mut pruned: Vec<ElementId> = Vec::new();
    let mut pruned_cost = 0.0f64;
    for (t, &s) in solution.iter().enumerate() {
        if solution_marginals[t] > 0.0 {
            pruned.push(s);
            pruned_cost += costs[s];
        }
    }

    assert!(
        solution_cost <= params.budget,
        "preliminary cost {solution_cost} escaped the budget {}",
        params.budget
    );
    assert!(
        pruned_cost <= solution_cost + TOL,
        "pruning increased the cost: {pruned_cost} > {solution_cost}"
    );
    let pruned_value = oracle.inner().value(&pruned);
    assert!(
        pruned_value >= current_value - TOL,
        "pruning lost value: {pruned_value} < {current_value}"
    );
    let spent = ledger.snapshot().since(entry);
    let bound = 4.0
        * (n.max(2) as f64).log2()
        * ((1.0 / params.eps) * (n as f64 * kappa).ln()
            + match params.value_rule {
                ValueRule::Enabled => params.max_triggers as f64,
                ValueRule::Disabled => 0.0,
            }
            + 1.0)
        + 2.0;
    assert!(
        spent.rounds as f64 <= bound,
        "{} rounds exceed the probing bound {bound}",
        spent.rounds
    );

    Ok(ThreshOutcome {
        solution: pruned,
        solution_cost: pruned_cost,
        value_triggers: triggers,
        admitted,
        leftover: live,
        trace,
        preliminary: Some(preliminary),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{CutObjective, ModularObjective, WeightedGraph};
    use crate::rng::mix;
    use rand::SeedableRng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(mix(seed))
    }

    fn params(tau: f64, eps: f64, budget: f64) -> ThreshParams {
        ThreshParams {
            tau,
            eps,
            budget,
            max_triggers: 16,
            value_rule: ValueRule::Enabled,
        }
    }

    #[test]
    fn triangle_run_matches_the_scan_shape() {
        let g = WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let f = CutObjective::new(g);
        let oracle = Oracle::new(&f).unwrap();
        let mut ledger = QueryLedger::root();
        let costs = vec![1.0; 3];
        let out = threshold_binary(
            &oracle,
            &[0, 1, 2],
            &costs,
            &params(1.0, 0.25, 1.0),
            &mut ledger,
            &mut rng(21),
        )
        .unwrap();
        assert_eq!(out.solution.len(), 1);
        assert_eq!(out.solution_cost, 1.0);
        assert_eq!(out.preliminary.as_deref(), Some(&out.solution[..]));
        assert_eq!(out.trace.len(), 1);
        // d = 1: the search has nothing to bisect, so one probe prices the
        // lone prefix: f(empty), f(S u A_1), and a marginal for each of the
        // two leftover vertices. Rounds: filter, probe, final pruning pass.
        assert_eq!(ledger.rounds(), 3);
        assert_eq!(ledger.queries(), 3 + 4 + 1);
    }

    #[test]
    fn modular_solution_survives_pruning_whole() {
        let f = ModularObjective::new(vec![2.0; 6]);
        let oracle = Oracle::new(&f).unwrap();
        let mut ledger = QueryLedger::root();
        let costs = vec![1.0; 6];
        let out = threshold_binary(
            &oracle,
            &[0, 1, 2, 3, 4, 5],
            &costs,
            &params(1.0, 0.25, 3.0),
            &mut ledger,
            &mut rng(22),
        )
        .unwrap();
        // All marginals are +2, so pruning keeps everything.
        assert_eq!(out.solution.len(), 3);
        assert_eq!(out.preliminary.as_ref().unwrap().len(), 3);
        assert_eq!(out.solution_cost, 3.0);
        assert_eq!(out.value_triggers, 0);
    }

    #[test]
    fn pruning_drops_redundant_tail_members() {
        // Coverage with a shared item: element 0 covers {shared, private},
        // elements 1 and 2 cover only {shared}. Whenever 0 is drawn last the
        // second of {1, 2} contributes nothing, so with eps = 0.9 the scan
        // accepts the full sequence and pruning has something to drop. Over
        // thirty seeds that ordering is all but guaranteed to appear, and
        // the pruning invariants must hold on every run.
        let f = crate::objectives::CoverageObjective::new(
            vec![vec![0, 1], vec![0], vec![0]],
            vec![1.0, 1.0],
        )
        .unwrap();
        let oracle = Oracle::new(&f).unwrap();
        let costs = vec![1.0; 3];
        let p = ThreshParams {
            tau: 0.3,
            eps: 0.9,
            budget: 3.0,
            max_triggers: 16,
            value_rule: ValueRule::Enabled,
        };
        let mut dropped = 0usize;
        for seed in 0..30 {
            let mut ledger = QueryLedger::root();
            let out = threshold_binary(
                &oracle,
                &[0, 1, 2],
                &costs,
                &p,
                &mut ledger,
                &mut rng(100 + seed),
            )
            .unwrap();
            let prelim = out.preliminary.as_ref().unwrap();
            // The pruned solution is an order-preserving subset.
            let mut it = prelim.iter();
            for s in &out.solution {
                assert!(it.any(|t| t == s));
            }
            dropped += prelim.len() - out.solution.len();
        }
        assert!(dropped > 0, "no run ever pruned anything");
    }
}
