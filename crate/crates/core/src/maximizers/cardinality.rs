//! Non-monotone maximization under a cardinality bound in O(log n) rounds.
//!
//! A cardinality bound is a knapsack with unit costs and budget k, and that
//! is literally how this runs: no cheap/expensive split (no element can be
//! cheap relative to a unit budget), one subsample of the whole pool, one
//! threshold grid anchored at alpha * n * f(x*) / k.

use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instances::{ConstraintKind, Instance};
use crate::kernels::ValueRule;
use crate::oracle::{ElementId, Oracle, QueryLedger, SetFunction};
use crate::rng::Seeder;

use super::grid::{best_singleton, enforce_ceilings, run_grid, GridSpec};
use super::params::{CardinalityParams, Variant};
use super::result::{pick_best, Candidate, Note, RunResult, TrajectoryBuilder, Winner};

pub fn par_cardinal<F: SetFunction>(
    inst: &Instance<F>,
    params: &CardinalityParams,
    variant: Variant,
    ledger: &mut QueryLedger,
    rng: &mut ChaCha8Rng,
) -> Result<RunResult> {
    let clock = Instant::now();
    params.validate()?;
    let k = match inst.kind() {
        ConstraintKind::Cardinality { k } => k,
        ConstraintKind::Knapsack => {
            return Err(Error::contract(
                "par_cardinal",
                "wants a cardinality instance; knapsacks go to par_knapsack",
            ))
        }
    };

    let n = inst.n();
    let costs = inst.costs();
    let resolved = params.resolve(n)?;
    let oracle = Oracle::new(inst.objective())?;
    let start = ledger.snapshot();
    let mut notes = Vec::new();

    let (x_star, f_star) = best_singleton(&oracle, inst.active(), ledger)?;
    let mut traj = TrajectoryBuilder::new();
    traj.observe(ledger.snapshot().since(start).rounds, f_star);

    let sampled: Vec<ElementId> =
        inst.active().iter().copied().filter(|_| rng.random_bool(params.p)).collect();
    let seeder = Seeder::new(rng.random::<u64>());

    let mut candidates = Vec::new();
    if f_star <= 0.0 {
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
        if sampled.is_empty() {
            notes.push(Note::EmptySample);
        } else {
            let spec = GridSpec {
                tau_hat: params.alpha * n as f64 * f_star / k as f64,
                budget: k as f64,
                eps_hat: resolved.eps_hat,
                ell: resolved.ell,
                value_rule: ValueRule::Enabled,
                rows: resolved.rows,
                reps: resolved.reps,
                variant,
            };
            candidates = run_grid(&oracle, &sampled, costs, &spec, &[], 0.0, &seeder, ledger)?;
            let after_grid = ledger.snapshot().since(start).rounds;
            for c in &candidates {
                traj.observe(after_grid, c.value);
            }
        }
        candidates.push(Candidate {
            set: vec![x_star],
            value: f_star,
            cost: 1.0,
            winner: Winner::Singleton,
        });
    }

    let best = pick_best(candidates);
    let usage = ledger.snapshot().since(start);
    enforce_ceilings(n, resolved.eps_hat, resolved.ell as f64, params.mode, variant, usage);
    assert!(
        inst.is_feasible(&best.set),
        "infeasible winner: {} elements against k = {k}",
        best.set.len()
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
