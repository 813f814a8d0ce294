//! Literal re-implementations of the threshold kernels for auditing.
//!
//! Every value these functions read is fetched through a plain oracle batch,
//! so the ledger totals are exactly what the query model prescribes: no
//! incremental shortcuts, no caching beyond what the model grants. The audit
//! tests run them side by side with the fast kernels on shared rng streams
//! and require identical outcomes and identical ledgers.

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernels::prefix::{
    binary_search_cutoff, cost_triggered, find_cutoff, value_triggered, PrefixRow, PrefixTable,
    Trigger,
};
use crate::kernels::sample::{sample_sequence, SampledSequence};
use crate::kernels::scan::{
    cost_spread_of, iteration_bound, validate_pool, IterationRecord, ThreshOutcome, ThreshParams,
    ValueRule,
};
use crate::oracle::{ElementId, Oracle, QueryLedger, SetFunction};

/// Which stopping-rule family a materialized table should serve. The scan
/// rules price marginals only for leftovers that fit the budget; the binary
/// rules price every leftover and add the prefix's own negative marginals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleSet {
    Scan,
    Binary,
}

/// Price one drawn sequence in a single batch and materialize all prefix
/// rows. Charges d+1 prefix values plus one query per priced (prefix,
/// leftover) pair to `ledger`.
#[allow(clippy::too_many_arguments)]
pub fn materialize_table<F: SetFunction>(
    oracle: &Oracle<'_, F>,
    ledger: &mut QueryLedger,
    solution: &[ElementId],
    live: &[ElementId],
    live_cost: f64,
    seq: &SampledSequence,
    costs: &[f64],
    tau: f64,
    budget: f64,
    rules: RuleSet,
) -> Result<PrefixTable> {
    let n = oracle.ground().len();
    let d = seq.len();
    let mut batch: Vec<Vec<ElementId>> = Vec::with_capacity(d + 1);
    let mut prefix = solution.to_vec();
    batch.push(prefix.clone());
    for t in 1..=d {
        prefix.push(seq.order[t - 1]);
        batch.push(prefix.clone());
    }

    let mut marked = vec![false; n];
    let mut priced: Vec<Vec<ElementId>> = Vec::with_capacity(d);
    for i in 1..=d {
        marked[seq.order[i - 1]] = true;
        let cum = seq.cumulative[i - 1];
        let list: Vec<ElementId> = live
            .iter()
            .copied()
            .filter(|&x| {
                !marked[x]
                    && match rules {
                        RuleSet::Scan => costs[x] + cum <= budget,
                        RuleSet::Binary => true,
                    }
            })
            .collect();
        priced.push(list);
    }
    for (i, list) in priced.iter().enumerate() {
        let base = batch[i + 1].clone();
        for &x in list {
            let mut grown = base.clone();
            grown.push(x);
            batch.push(grown);
        }
    }

    let vals = oracle.evaluate_batch(ledger, &batch)?;
    let mut rows = Vec::with_capacity(d);
    let mut offset = d + 1;
    let mut chain_neg = 0.0f64;
    for i in 1..=d {
        let list = &priced[i - 1];
        let prefix_value = vals[i];
        let chain_marginal = vals[i] - vals[i - 1];
        if chain_marginal < 0.0 {
            chain_neg += -chain_marginal;
        }
        let cum = seq.cumulative[i - 1];
        let mut fit = Vec::new();
        let mut good = Vec::new();
        let mut good_cost = 0.0f64;
        let mut good_gain = 0.0f64;
        let mut loss = 0.0f64;
        for (j, &x) in list.iter().enumerate() {
            let m = vals[offset + j] - prefix_value;
            let fits = match rules {
                RuleSet::Scan => true,
                RuleSet::Binary => costs[x] + cum <= budget,
            };
            if fits {
                fit.push(x);
                if m >= tau * costs[x] {
                    good.push(x);
                    good_cost += costs[x];
                    good_gain += m;
                } else if m < 0.0 && rules == RuleSet::Scan {
                    loss += -m;
                }
            }
            if rules == RuleSet::Binary && m < 0.0 {
                loss += -m;
            }
        }
        offset += list.len();
        rows.push(PrefixRow {
            fit,
            good,
            good_cost,
            good_gain,
            negative_loss: loss,
            prefix_negative_loss: match rules {
                RuleSet::Scan => 0.0,
                RuleSet::Binary => chain_neg,
            },
            prefix_value,
        });
    }
    Ok(PrefixTable {
        rows,
        pool_cost: live_cost,
        base_value: vals[0],
    })
}

/// Literal counterpart of the ascending-scan kernel.
pub fn threshold_sequence_reference<F: SetFunction>(
    oracle: &Oracle<'_, F>,
    pool: &[ElementId],
    costs: &[f64],
    params: &ThreshParams,
    ledger: &mut QueryLedger,
    rng: &mut ChaCha8Rng,
) -> Result<ThreshOutcome> {
    params.validate()?;
    let n = oracle.ground().len();
    validate_pool(pool, costs, n, params.budget)?;

    let singletons: Vec<Vec<ElementId>> = pool.iter().map(|&x| vec![x]).collect();
    let vals = oracle.evaluate_batch(ledger, &singletons)?;
    let mut admitted = Vec::new();
    let mut admitted_cost = 0.0f64;
    for (&x, &v) in pool.iter().zip(&vals) {
        if v >= params.tau * costs[x] {
            admitted.push(x);
            admitted_cost += costs[x];
        }
    }

    let mut live = admitted.clone();
    let mut live_cost = admitted_cost;
    let kappa = cost_spread_of(&live, costs);
    let check_value = params.value_rule == ValueRule::Enabled;

    let mut solution: Vec<ElementId> = Vec::new();
    let mut in_solution = vec![false; n];
    let mut solution_cost = 0.0f64;
    let mut triggers = 0u64;
    let mut trace: Vec<IterationRecord> = Vec::new();

    while !live.is_empty() && (!check_value || triggers < params.max_triggers) {
        let seq =
            sample_sequence(&live, &in_solution, solution_cost, costs, params.budget, rng)?;
        let table = materialize_table(
            oracle,
            ledger,
            &solution,
            &live,
            live_cost,
            &seq,
            costs,
            params.tau,
            params.budget,
            RuleSet::Scan,
        )?;
        let cut = if check_value {
            find_cutoff(&table, params.eps)
        } else {
            // Value rule off: only the cost rule participates.
            let mut cost_index = None;
            for (idx, row) in table.rows.iter().enumerate() {
                if cost_triggered(row.good_cost, params.eps, table.pool_cost) {
                    cost_index = Some(idx + 1);
                    break;
                }
            }
            let cost_index = cost_index.expect("cost rule holds at the final prefix");
            let row = table.row(cost_index);
            crate::kernels::prefix::Cutoff {
                cost_index,
                value_index: None,
                cutoff: cost_index,
                trigger: if row.good.is_empty() {
                    Trigger::Exhausted
                } else {
                    Trigger::Cost
                },
            }
        };
        let row = table.row(cut.cutoff);
        trace.push(IterationRecord {
            pool_size: live.len(),
            pool_cost: live_cost,
            sequence_len: seq.len(),
            cutoff: cut.cutoff,
            trigger: cut.trigger,
            kept: row.good.len(),
        });
        for &a in &seq.order[..cut.cutoff] {
            solution.push(a);
            in_solution[a] = true;
        }
        solution_cost = seq.cumulative[cut.cutoff - 1];
        live = row.good.clone();
        live_cost = row.good_cost;
        if cut.trigger == Trigger::Value {
            triggers += 1;
        }
    }

    assert!(solution_cost <= params.budget);
    if !admitted.is_empty() {
        let bound = iteration_bound(
            n,
            kappa,
            params.eps,
            match params.value_rule {
                ValueRule::Enabled => params.max_triggers,
                ValueRule::Disabled => 0,
            },
        );
        assert!(trace.len() as f64 <= bound);
    }

    Ok(ThreshOutcome {
        solution,
        solution_cost,
        value_triggers: triggers,
        admitted,
        leftover: live,
        trace,
        preliminary: None,
    })
}

/// Literal counterpart of the binary-search kernel.
pub fn threshold_binary_reference<F: SetFunction>(
    oracle: &Oracle<'_, F>,
    pool: &[ElementId],
    costs: &[f64],
    params: &ThreshParams,
    ledger: &mut QueryLedger,
    rng: &mut ChaCha8Rng,
) -> Result<ThreshOutcome> {
    params.validate()?;
    let n = oracle.ground().len();
    validate_pool(pool, costs, n, params.budget)?;

    let singletons: Vec<Vec<ElementId>> = pool.iter().map(|&x| vec![x]).collect();
    let vals = oracle.evaluate_batch(ledger, &singletons)?;
    let mut admitted = Vec::new();
    let mut admitted_cost = 0.0f64;
    for (&x, &v) in pool.iter().zip(&vals) {
        if v >= params.tau * costs[x] {
            admitted.push(x);
            admitted_cost += costs[x];
        }
    }

    let mut live = admitted.clone();
    let mut live_cost = admitted_cost;
    let check_value = params.value_rule == ValueRule::Enabled;

    let mut solution: Vec<ElementId> = Vec::new();
    let mut solution_marginals: Vec<f64> = Vec::new();
    let mut in_solution = vec![false; n];
    let mut solution_cost = 0.0f64;
    let mut base_bought = false;
    let mut current_value = f64::NAN;
    let mut triggers = 0u64;
    let mut trace: Vec<IterationRecord> = Vec::new();

    struct Row {
        good: Vec<ElementId>,
        good_cost: f64,
    }

    while !live.is_empty() && (!check_value || triggers < params.max_triggers) {
        let seq =
            sample_sequence(&live, &in_solution, solution_cost, costs, params.budget, rng)?;
        let d = seq.len();
        let mut in_prefix = vec![usize::MAX; n];
        for (t, &a) in seq.order.iter().enumerate() {
            in_prefix[a] = t + 1;
        }

        // Chain values f(S u A_t); index 0 is f(S). A None entry has not
        // been bought yet; f(S) is only unknown before the very first probe
        // of the run.
        let mut chain: Vec<Option<f64>> = vec![None; d + 1];
        if base_bought {
            chain[0] = Some(current_value);
        }
        let mut probe_rows: Vec<(usize, Row)> = Vec::new();
        let mut failure: Option<Error> = None;

        let outcome = binary_search_cutoff(d, |i: usize| {
            if failure.is_some() {
                return (true, false);
            }
            // Assemble the literal batch: any chain values not yet bought,
            // then one grown set per leftover.
            let mut batch: Vec<Vec<ElementId>> = Vec::new();
            let mut chain_targets: Vec<usize> = Vec::new();
            for (t, slot) in chain.iter().enumerate().take(i + 1) {
                if slot.is_none() {
                    let mut set = solution.clone();
                    set.extend_from_slice(&seq.order[..t]);
                    batch.push(set);
                    chain_targets.push(t);
                }
            }
            let mut base = solution.clone();
            base.extend_from_slice(&seq.order[..i]);
            let mut leftovers: Vec<ElementId> = Vec::new();
            for &x in &live {
                if in_prefix[x] <= i {
                    continue;
                }
                let mut grown = base.clone();
                grown.push(x);
                batch.push(grown);
                leftovers.push(x);
            }
            let vals = match oracle.evaluate_batch(ledger, &batch) {
                Ok(v) => v,
                Err(e) => {
                    failure = Some(e);
                    return (true, false);
                }
            };
            for (slot, &t) in chain_targets.iter().enumerate() {
                chain[t] = Some(vals[slot]);
            }
            let prefix_value = chain[i].expect("chain bought through i");
            let mut chain_neg = 0.0f64;
            for t in 1..=i {
                let m = chain[t].expect("chain bought through i")
                    - chain[t - 1].expect("chain bought through i");
                if m < 0.0 {
                    chain_neg += -m;
                }
            }

            let cum = seq.cost_through(i, solution_cost);
            let mut good = Vec::new();
            let mut good_cost = 0.0f64;
            let mut good_gain = 0.0f64;
            let mut loss = 0.0f64;
            for (j, &x) in leftovers.iter().enumerate() {
                let m = vals[chain_targets.len() + j] - prefix_value;
                if m < 0.0 {
                    loss += -m;
                }
                if costs[x] + cum <= params.budget && m >= params.tau * costs[x] {
                    good.push(x);
                    good_cost += costs[x];
                    good_gain += m;
                }
            }

            let c1 = cost_triggered(good_cost, params.eps, live_cost);
            let c2 = check_value && value_triggered(good_gain, params.eps, loss + chain_neg);
            probe_rows.push((i, Row { good, good_cost }));
            (c1, c2)
        });
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
        base_bought = true;
        for t in 1..=cutoff {
            let a = seq.order[t - 1];
            solution.push(a);
            in_solution[a] = true;
            solution_marginals
                .push(chain[t].expect("chain bought") - chain[t - 1].expect("chain bought"));
        }
        solution_cost = seq.cumulative[cutoff - 1];
        current_value = chain[cutoff].expect("chain bought through the cutoff");
        live = row.good;
        live_cost = row.good_cost;
        if outcome.flag {
            triggers += 1;
        }
    }

    // Final pruning pass: one literal batch over the solution prefixes, one
    // query per member. The decision reuses the chain marginals the run
    // already bought; the batch is what the round's queries are.
    let preliminary = solution.clone();
    let mut batch: Vec<Vec<ElementId>> = Vec::with_capacity(solution.len());
    let mut prefix: Vec<ElementId> = Vec::new();
    for &s in &solution {
        prefix.push(s);
        batch.push(prefix.clone());
    }
    oracle.evaluate_batch(ledger, &batch)?;
    let mut pruned = Vec::new();
    let mut pruned_cost = 0.0f64;
    for (t, &s) in solution.iter().enumerate() {
        if solution_marginals[t] > 0.0 {
            pruned.push(s);
            pruned_cost += costs[s];
        }
    }

    assert!(solution_cost <= params.budget);

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
