//! Sample greedy: density-ordered greedy that keeps each chosen element
//! only with probability p and discards it permanently otherwise. The
//! random rejections are what buys the approximation factor on non-monotone
//! objectives; p = 1 degenerates to plain density greedy.

use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instances::Instance;
use crate::maximizers::{RunResult, TrajectoryBuilder};
use crate::oracle::{Cursor, Oracle, QueryLedger, SetFunction};

use super::greedy::finish;
use super::lazy::LazyHeap;

pub fn sample_greedy<F: SetFunction>(
    inst: &Instance<F>,
    p: f64,
    ledger: &mut QueryLedger,
    rng: &mut ChaCha8Rng,
) -> Result<RunResult> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParam {
            name: "p",
            value: p,
            want: "a probability in (0, 1]",
        });
    }
    let clock = Instant::now();
    let oracle = Oracle::new(inst.objective())?;
    let costs = inst.costs();
    let budget = inst.budget();
    let start = ledger.snapshot();

    // Bounds are densities; costs are fixed, so stale densities dominate
    // current ones exactly as stale marginals do.
    let mut heap = LazyHeap::new();
    let cursor0 = oracle.inner().cursor();
    let mut best0 = f64::NEG_INFINITY;
    for &x in inst.active() {
        let m = cursor0.marginal(x);
        best0 = best0.max(m);
        heap.push(x, m / costs[x], 0);
    }
    ledger.charge_batch(inst.active().len() as u64)?;
    let mut traj = TrajectoryBuilder::new();
    traj.observe(ledger.snapshot().since(start).rounds, best0);

    let mut cursor = oracle.inner().cursor();
    let mut solution = Vec::new();
    let mut solution_cost = 0.0f64;
    let mut running = 0.0f64;
    let mut picks = 0u64;

    while let Some((x, bound, stamp)) = heap.pop() {
        if bound <= 0.0 {
            break;
        }
        if solution_cost + costs[x] > budget {
            continue;
        }
        if stamp == picks {
            // x is the feasible element of maximum current density. One
            // coin decides; either way x never returns to the heap.
            picks += 1;
            if rng.random_bool(p) {
                cursor.insert(x);
                solution.push(x);
                solution_cost += costs[x];
                running += bound * costs[x];
                traj.observe(ledger.snapshot().since(start).rounds, running);
            }
        } else {
            heap.note_refresh();
            let m = cursor.marginal(x);
            ledger.charge_batch(1)?;
            heap.push(x, m / costs[x], picks);
        }
    }

    finish(inst, &oracle, solution, solution_cost, ledger, start, clock, traj)
}
