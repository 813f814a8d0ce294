//! Threshold sampling with an ascending prefix scan.
//!
//! Each while-iteration draws one random feasible sequence, issues a single
//! batch that prices every prefix, and keeps the shortest prefix at which
//! either stopping rule holds. The batch for a sequence of length d charges
//! d+1 prefix values plus one marginal per (prefix, fitting leftover) pair,
//! all in one adaptive round, whether or not the scan stops early.

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernels::prefix::{cost_triggered, value_triggered, Trigger};
use crate::kernels::sample::sample_sequence;
use crate::oracle::{Cursor, ElementId, Oracle, QueryLedger, SetFunction};

/// Whether the negative-marginal stopping rule participates. Monotone
/// objectives switch it off; nothing else changes, including the accounting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueRule {
    Enabled,
    Disabled,
}

#[derive(Debug, Clone, Copy)]
pub struct ThreshParams {
    /// Density threshold; must be positive.
    pub tau: f64,
    /// Shrink factor for the stopping rules, in (0, 1).
    pub eps: f64,
    /// Knapsack budget.
    pub budget: f64,
    /// Value-rule trigger allowance; the loop stops once reached.
    pub max_triggers: u64,
    pub value_rule: ValueRule,
}

impl ThreshParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidParam {
                name: "tau",
                value: self.tau,
                want: "a positive finite threshold",
            });
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::InvalidParam {
                name: "eps",
                value: self.eps,
                want: "a value strictly inside (0, 1)",
            });
        }
        if !(self.budget > 0.0 && self.budget.is_finite()) {
            return Err(Error::InvalidParam {
                name: "budget",
                value: self.budget,
                want: "a positive finite budget",
            });
        }
        if self.value_rule == ValueRule::Enabled && self.max_triggers == 0 {
            return Err(Error::InvalidParam {
                name: "max_triggers",
                value: 0.0,
                want: "at least one allowed trigger",
            });
        }
        Ok(())
    }

    fn effective_triggers(&self) -> u64 {
        match self.value_rule {
            ValueRule::Enabled => self.max_triggers,
            ValueRule::Disabled => 0,
        }
    }
}

/// One while-iteration as recorded in the trace.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// Pool size when the sequence was drawn.
    pub pool_size: usize,
    /// c(X) of that pool.
    pub pool_cost: f64,
    /// Length d of the drawn sequence.
    pub sequence_len: usize,
    /// Accepted prefix length k*.
    pub cutoff: usize,
    pub trigger: Trigger,
    /// Survivors carried into the next iteration.
    pub kept: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThreshOutcome {
    /// Solution in insertion order.
    pub solution: Vec<ElementId>,
    /// c(solution), accumulated in insertion order.
    pub solution_cost: f64,
    /// How often the value rule fired.
    pub value_triggers: u64,
    /// Pool after the density filter, in input order.
    pub admitted: Vec<ElementId>,
    /// Pool at exit: nonempty only when the trigger allowance ran out.
    pub leftover: Vec<ElementId>,
    pub trace: Vec<IterationRecord>,
    /// Binary variant only: the solution before its final pruning pass.
    pub preliminary: Option<Vec<ElementId>>,
}

/// Upper bound on while-iterations implied by the stopping rules: every
/// iteration either shrinks c(X) by (1-eps) or spends a trigger.
pub(crate) fn iteration_bound(n: usize, kappa: f64, eps: f64, triggers: u64) -> f64 {
    ((1.0 / eps) * (n as f64 * kappa).ln()).ceil() + triggers as f64 + 1.0
}

pub(crate) fn validate_pool(
    pool: &[ElementId],
    costs: &[f64],
    n: usize,
    budget: f64,
) -> Result<()> {
    if costs.len() != n {
        return Err(Error::contract(
            "threshold kernel",
            format!("{} costs for a ground set of {n}", costs.len()),
        ));
    }
    let mut seen = vec![false; n];
    for &x in pool {
        if x >= n {
            return Err(Error::ElementOutOfRange { id: x, n });
        }
        if seen[x] {
            return Err(Error::contract(
                "threshold kernel",
                format!("duplicate pool element {x}"),
            ));
        }
        seen[x] = true;
        let c = costs[x];
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::contract(
                "threshold kernel",
                format!("pool element {x} has non-positive cost {c}"),
            ));
        }
        if c > budget {
            return Err(Error::contract(
                "threshold kernel",
                format!("pool element {x} with cost {c} exceeds the budget {budget}"),
            ));
        }
    }
    Ok(())
}

/// Density filter: keep pool elements with f({x}) >= tau * c(x), charging one
/// query per candidate in a single round. Returns the kept elements in input
/// order together with their accumulated cost.
pub(crate) fn density_filter<F: SetFunction>(
    oracle: &Oracle<'_, F>,
    pool: &[ElementId],
    costs: &[f64],
    tau: f64,
    ledger: &mut QueryLedger,
) -> Result<(Vec<ElementId>, f64)> {
    let empty_cursor = oracle.inner().cursor();
    let f_empty = empty_cursor.value();
    let mut admitted = Vec::new();
    let mut admitted_cost = 0.0;
    for &x in pool {
        let v = f_empty + empty_cursor.marginal(x);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                context: format!("singleton value of element {x}"),
            });
        }
        if v >= tau * costs[x] {
            admitted.push(x);
            admitted_cost += costs[x];
        }
    }
    ledger.charge_batch(pool.len() as u64)?;
    Ok((admitted, admitted_cost))
}

/// Run the threshold sampling loop over `pool` and return the grown solution.
///
/// Adaptivity: one round for the density filter plus one round per
/// while-iteration. The iteration count is asserted against the bound from
/// the stopping rules; the solution cost never exceeds the budget.
pub fn threshold_sequence<F: SetFunction>(
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

    let (admitted, admitted_cost) = density_filter(oracle, pool, costs, params.tau, ledger)?;
    let mut live = admitted.clone();
    let mut live_cost = admitted_cost;

    let mut solution: Vec<ElementId> = Vec::new();
    let mut in_solution = vec![false; n];
    let mut solution_cost = 0.0f64;
    let mut cursor = oracle.inner().cursor();
    let mut triggers = 0u64;
    let mut trace: Vec<IterationRecord> = Vec::new();
    let mut in_prefix = vec![false; n];

    let kappa = cost_spread_of(&live, costs);
    let check_value = params.value_rule == ValueRule::Enabled;

    while !live.is_empty() && (!check_value || triggers < params.max_triggers) {
        let seq = sample_sequence(&live, &in_solution, solution_cost, costs, params.budget, rng)?;
        let d = seq.len();
        debug_assert!(d >= 1);

        let mut queries = d as u64 + 1;
        let mut found: Option<(usize, Trigger)> = None;
        let mut kept: Vec<ElementId> = Vec::new();
        let mut kept_cost = 0.0f64;

        for i in 1..=d {
            let a = seq.order[i - 1];
            in_prefix[a] = true;
            let cum = seq.cumulative[i - 1];
            if found.is_none() {
                cursor.insert(a);
                let mut good: Vec<ElementId> = Vec::new();
                let mut good_cost = 0.0f64;
                let mut good_gain = 0.0f64;
                let mut loss = 0.0f64;
                for &x in &live {
                    if in_prefix[x] || costs[x] + cum > params.budget {
                        continue;
                    }
                    queries += 1;
                    let m = cursor.marginal(x);
                    if !m.is_finite() {
                        return Err(Error::NonFinite {
                            context: format!("marginal of element {x}"),
                        });
                    }
                    if m >= params.tau * costs[x] {
                        good.push(x);
                        good_cost += costs[x];
                        good_gain += m;
                    } else if m < 0.0 {
                        loss += -m;
                    }
                }
                let c1 = cost_triggered(good_cost, params.eps, live_cost);
                let c2 = check_value && value_triggered(good_gain, params.eps, loss);
                if c1 || c2 {
                    let trigger = if c1 {
                        if good.is_empty() {
                            Trigger::Exhausted
                        } else {
                            Trigger::Cost
                        }
                    } else {
                        Trigger::Value
                    };
                    found = Some((i, trigger));
                    kept = good;
                    kept_cost = good_cost;
                }
            } else {
                for &x in &live {
                    if !in_prefix[x] && costs[x] + cum <= params.budget {
                        queries += 1;
                    }
                }
            }
        }
        ledger.charge_batch(queries)?;
        for &a in &seq.order {
            in_prefix[a] = false;
        }

        let (cutoff, trigger) =
            found.expect("the cost rule holds once the sequence is exhausted");
        trace.push(IterationRecord {
            pool_size: live.len(),
            pool_cost: live_cost,
            sequence_len: d,
            cutoff,
            trigger,
            kept: kept.len(),
        });
        for &a in &seq.order[..cutoff] {
            solution.push(a);
            in_solution[a] = true;
        }
        solution_cost = seq.cumulative[cutoff - 1];
        live = kept;
        live_cost = kept_cost;
        if trigger == Trigger::Value {
            triggers += 1;
        }
    }

    assert!(
        solution_cost <= params.budget,
        "solution cost {solution_cost} escaped the budget {}",
        params.budget
    );
    if !admitted.is_empty() {
        let bound = iteration_bound(n, kappa, params.eps, params.effective_triggers());
        assert!(
            trace.len() as f64 <= bound,
            "{} iterations exceed the stopping-rule bound {bound}",
            trace.len()
        );
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

pub(crate) fn cost_spread_of(pool: &[ElementId], costs: &[f64]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for &x in pool {
        lo = lo.min(costs[x]);
        hi = hi.max(costs[x]);
    }
    if pool.is_empty() {
        1.0
    } else {
        hi / lo
    }
}
