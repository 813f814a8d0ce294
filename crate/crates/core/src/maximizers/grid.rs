//! The threshold grid: every (threshold, repetition) pair runs as its own
//! parallel branch with a forked ledger and a derived rng stream, and the
//! branch evaluates its own solution so the parent never has to gather the
//! full table. Rounds join as a maximum, queries as a sum.

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernels::{threshold_binary, threshold_sequence, ThreshOutcome, ThreshParams, ValueRule};
use crate::oracle::{ElementId, Oracle, QueryLedger, SetFunction};
use crate::rng::{Purpose, Seeder};

use super::params::Variant;
use super::result::{beats, Candidate, Winner};

/// Everything a grid launch needs besides the pool itself.
#[derive(Debug, Clone, Copy)]
pub(crate) struct GridSpec {
    /// Top of the threshold ladder.
    pub tau_hat: f64,
    /// Budget handed to every threshold run.
    pub budget: f64,
    /// Shrunken accuracy; also the ladder's decay rate.
    pub eps_hat: f64,
    /// Value-rule trigger allowance per run.
    pub ell: u64,
    pub value_rule: ValueRule,
    /// Ladder length.
    pub rows: usize,
    /// Independent repetitions per threshold.
    pub reps: u64,
    pub variant: Variant,
}

/// All repetitions of a single threshold run, in rep order.
#[derive(Debug)]
pub struct RepeatedRuns {
    pub runs: Vec<ThreshOutcome>,
}

impl RepeatedRuns {
    /// Whether some repetition stopped while its solution was still cheap.
    pub fn any_below_half_budget(&self, budget: f64) -> bool {
        self.runs.iter().any(|r| r.solution_cost < budget / 2.0)
    }

    pub fn max_cost(&self) -> f64 {
        self.runs.iter().fold(0.0f64, |b, r| b.max(r.solution_cost))
    }
}

fn run_one<F: SetFunction>(
    oracle: &Oracle<'_, F>,
    pool: &[ElementId],
    costs: &[f64],
    params: &ThreshParams,
    variant: Variant,
    ledger: &mut QueryLedger,
    rng: &mut ChaCha8Rng,
) -> Result<ThreshOutcome> {
    match variant {
        Variant::Scan => threshold_sequence(oracle, pool, costs, params, ledger, rng),
        Variant::Binary => threshold_binary(oracle, pool, costs, params, ledger, rng),
    }
}

/// Runs one threshold `reps` times as parallel branches. Branch (row, rep)
/// draws its randomness from `seeder.stream(Algorithm, row, rep)`, so a run
/// can be replayed in isolation.
pub fn repeat_threshold_runs<F: SetFunction>(
    oracle: &Oracle<'_, F>,
    pool: &[ElementId],
    costs: &[f64],
    params: &ThreshParams,
    variant: Variant,
    reps: u64,
    seeder: &Seeder,
    row: u64,
    ledger: &mut QueryLedger,
) -> Result<RepeatedRuns> {
    if reps == 0 {
        return Err(Error::InvalidParam {
            name: "reps",
            value: 0.0,
            want: "at least 1",
        });
    }
    let mut branches = ledger.fork(reps as usize)?;
    let mut runs = Vec::with_capacity(reps as usize);
    for (rep, branch) in branches.iter_mut().enumerate() {
        let mut rng = seeder.stream(Purpose::Algorithm, row, rep as u64);
        runs.push(run_one(oracle, pool, costs, params, variant, branch, &mut rng)?);
    }
    ledger.join(&mut branches)?;
    Ok(RepeatedRuns { runs })
}

/// Runs the whole ladder and reduces it to one candidate per threshold.
///
/// Each branch pays one extra query to evaluate its own (sorted) solution,
/// optionally unioned with `extra`, so every candidate value is a fresh
/// evaluation rather than the kernel's running total. The reduction uses the
/// same total order as the final argmax, which keeps the result independent
/// of gather order.
pub(crate) fn run_grid<F: SetFunction>(
    oracle: &Oracle<'_, F>,
    pool: &[ElementId],
    costs: &[f64],
    spec: &GridSpec,
    extra: &[ElementId],
    extra_cost: f64,
    seeder: &Seeder,
    ledger: &mut QueryLedger,
) -> Result<Vec<Candidate>> {
    if spec.reps == 0 {
        return Err(Error::InvalidParam {
            name: "reps",
            value: 0.0,
            want: "at least 1",
        });
    }
    let mut rows = ledger.fork(spec.rows)?;
    let mut bests = Vec::with_capacity(spec.rows);
    for (row, row_ledger) in rows.iter_mut().enumerate() {
        let tau = spec.tau_hat * (1.0 - spec.eps_hat).powi(row as i32);
        let params = ThreshParams {
            tau,
            budget: spec.budget,
            eps: spec.eps_hat,
            max_triggers: spec.ell,
            value_rule: spec.value_rule,
        };
        let mut cells = row_ledger.fork(spec.reps as usize)?;
        let mut row_best: Option<Candidate> = None;
        for (rep, cell) in cells.iter_mut().enumerate() {
            let mut rng = seeder.stream(Purpose::Algorithm, row as u64, rep as u64);
            let outcome = run_one(oracle, pool, costs, &params, spec.variant, cell, &mut rng)?;
            let mut set = outcome.solution;
            set.extend_from_slice(extra);
            set.sort_unstable();
            let value = oracle.evaluate_batch(cell, std::slice::from_ref(&set))?[0];
            let cand = Candidate {
                set,
                value,
                cost: outcome.solution_cost + extra_cost,
                winner: Winner::Grid { row, rep },
            };
            row_best = Some(match row_best.take() {
                Some(best) if !beats(&cand, &best) => best,
                _ => cand,
            });
        }
        row_ledger.join(&mut cells)?;
        bests.push(row_best.expect("at least one repetition ran"));
    }
    ledger.join(&mut rows)?;
    Ok(bests)
}

/// Asserts the ceilings after every run rather than only in tests: a
/// regression that breaks the adaptivity story should be loud.
pub(crate) fn enforce_ceilings(
    n: usize,
    eps_hat: f64,
    extra_rounds: f64,
    mode: super::params::Mode,
    variant: Variant,
    usage: crate::oracle::LedgerSnapshot,
) {
    let caps = super::params::compute_ceilings(n, eps_hat, extra_rounds, mode, variant);
    if let Some(ceiling) = caps.rounds {
        assert!(
            (usage.rounds as f64) <= ceiling,
            "adaptivity ceiling broken: {} rounds, ceiling {ceiling:.1}",
            usage.rounds
        );
    }
    if let Some(cap) = caps.queries {
        assert!(
            (usage.queries as f64) <= cap,
            "query ceiling broken: {} queries, ceiling {cap:.0}",
            usage.queries
        );
    }
}

/// One batch of singleton queries over `pool`; ties keep the earlier element.
pub(crate) fn best_singleton<F: SetFunction>(
    oracle: &Oracle<'_, F>,
    pool: &[ElementId],
    ledger: &mut QueryLedger,
) -> Result<(ElementId, f64)> {
    if pool.is_empty() {
        return Err(Error::contract("best_singleton", "empty pool"));
    }
    let sets: Vec<Vec<ElementId>> = pool.iter().map(|&x| vec![x]).collect();
    let values = oracle.evaluate_batch(ledger, &sets)?;
    let mut best = (pool[0], values[0]);
    for (&x, &v) in pool.iter().zip(values.iter()).skip(1) {
        if v > best.1 {
            best = (x, v);
        }
    }
    Ok(best)
}
