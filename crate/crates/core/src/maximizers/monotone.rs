//! Monotone maximization under a knapsack in O(log n) adaptive rounds.
//!
//! Monotonicity removes the need for both subsampling and the value rule:
//! the grid runs on every element costing at least eps_hat * B / n, with its
//! budget shaved to (1 - eps_hat) B, and the cheap remainder is unioned into
//! every candidate wholesale. The shave exactly pays for the union: the
//! cheap side costs less than n * (eps_hat * B / n), so every candidate
//! stays within B.

use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instances::{ConstraintKind, Instance};
use crate::kernels::ValueRule;
use crate::oracle::{ElementId, Oracle, QueryLedger, SetFunction};
use crate::rng::Seeder;

use super::grid::{best_singleton, enforce_ceilings, run_grid, GridSpec};
use super::params::{MonotoneParams, Variant};
use super::result::{pick_best, Candidate, Note, RunResult, TrajectoryBuilder, Winner};

pub fn par_knapsack_monotone<F: SetFunction>(
    inst: &Instance<F>,
    params: &MonotoneParams,
    variant: Variant,
    ledger: &mut QueryLedger,
    rng: &mut ChaCha8Rng,
) -> Result<RunResult> {
    let clock = Instant::now();
    params.validate()?;
    if inst.kind() != ConstraintKind::Knapsack {
        return Err(Error::contract(
            "par_knapsack_monotone",
            "wants a knapsack instance; cardinality bounds go to par_cardinal",
        ));
    }

    let n = inst.n();
    let budget = inst.budget();
    let costs = inst.costs();
    let resolved = params.resolve(n)?;
    let oracle = Oracle::new(inst.objective())?;
    let start = ledger.snapshot();
    let mut notes = Vec::new();

    let cutoff = resolved.eps_hat * budget / n as f64;
    let (mut small, large): (Vec<ElementId>, Vec<ElementId>) =
        inst.active().iter().copied().partition(|&x| costs[x] < cutoff);
    small.sort_unstable();
    let small_cost: f64 = small.iter().map(|&x| costs[x]).sum();

    // Benchmark over the whole pool; it anchors the threshold ladder.
    let (x_star, f_star) = best_singleton(&oracle, inst.active(), ledger)?;
    let mut traj = TrajectoryBuilder::new();
    traj.observe(ledger.snapshot().since(start).rounds, f_star);

    let seeder = Seeder::new(rng.random::<u64>());

    let mut candidates = Vec::new();
    if f_star > 0.0 && !large.is_empty() {
        let spec = GridSpec {
            tau_hat: params.alpha * n as f64 * f_star / budget,
            budget: (1.0 - resolved.eps_hat) * budget,
            eps_hat: resolved.eps_hat,
            ell: 0,
            value_rule: ValueRule::Disabled,
            rows: resolved.rows,
            reps: resolved.reps,
            variant,
        };
        candidates =
            run_grid(&oracle, &large, costs, &spec, &small, small_cost, &seeder, ledger)?;
        let after_grid = ledger.snapshot().since(start).rounds;
        for c in &candidates {
            traj.observe(after_grid, c.value);
        }
    } else if f_star <= 0.0 {
        // A worthless benchmark under monotonicity means there is nothing
        // worth buying; report the empty set at its fresh value.
        notes.push(Note::NoPositiveSingleton);
        let empty_value = oracle.evaluate_batch(ledger, &[Vec::new()])?[0];
        traj.observe(ledger.snapshot().since(start).rounds, empty_value);
        candidates.push(Candidate {
            set: Vec::new(),
            value: empty_value,
            cost: 0.0,
            winner: Winner::Empty,
        });
    } else {
        // Nothing to ladder over; the cheap side alone stands in.
        notes.push(Note::EmptySample);
        let fallback_value = oracle.evaluate_batch(ledger, std::slice::from_ref(&small))?[0];
        traj.observe(ledger.snapshot().since(start).rounds, fallback_value);
        candidates.push(Candidate {
            set: small.clone(),
            value: fallback_value,
            cost: small_cost,
            winner: Winner::Unconstrained,
        });
    }
    if f_star > 0.0 {
        candidates.push(Candidate {
            set: vec![x_star],
            value: f_star,
            cost: costs[x_star],
            winner: Winner::Singleton,
        });
    }

    let best = pick_best(candidates);
    let usage = ledger.snapshot().since(start);
    // The grid pool here is not subsampled, so an admitted run can hold up
    // to n / eps_hat elements' worth of budget headroom; the surcharge
    // covers the extra ln(1/eps_hat) in the iteration bound.
    let extra = super::params::monotone_extra(resolved.eps_hat);
    enforce_ceilings(n, resolved.eps_hat, extra, params.mode, variant, usage);
    assert!(
        inst.is_feasible(&best.set),
        "infeasible winner: cost {} over budget {budget}",
        best.cost
    );
    traj.observe(usage.rounds, best.value);

    Ok(RunResult {
        solution: best.set,
        value: best.value,
        cost: best.cost,
        usage,
        winner: best.winner,
        wall_ms: clock.elapsed().as_secs_f64() * 1e3,
        notes,
        trajectory: traj.finish(),
    })
}
