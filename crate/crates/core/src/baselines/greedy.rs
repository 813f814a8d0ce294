//! Sequential greedy with lazy evaluations, plus the naive version it must
//! match set-for-set.
//!
//! Greedy picks by marginal value, not density. Elements that no longer fit
//! the remaining budget are discarded the moment they surface, and the loop
//! stops when the best remaining bound is nonpositive: bounds dominate true
//! marginals, so nothing feasible can still help.

use std::time::Instant;

use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::instances::Instance;
use crate::maximizers::{RunResult, TrajectoryBuilder, Winner};
use crate::oracle::{Cursor, ElementId, Oracle, QueryLedger, SetFunction};

use super::lazy::LazyHeap;

/// Lazy greedy. Each stale re-evaluation is one query in its own adaptive
/// round: the decision to measure an element depends on every measurement
/// before it, so there is nothing to batch. The rng is unused (greedy is
/// deterministic) and kept for signature parity with the other algorithms.
pub fn greedy<F: SetFunction>(
    inst: &Instance<F>,
    ledger: &mut QueryLedger,
    _rng: &mut ChaCha8Rng,
) -> Result<RunResult> {
    let clock = Instant::now();
    let oracle = Oracle::new(inst.objective())?;
    let costs = inst.costs();
    let budget = inst.budget();
    let start = ledger.snapshot();

    // One batch of singleton marginals seeds every bound.
    let mut heap = LazyHeap::new();
    let cursor0 = oracle.inner().cursor();
    let mut best0 = f64::NEG_INFINITY;
    for &x in inst.active() {
        let m = cursor0.marginal(x);
        best0 = best0.max(m);
        heap.push(x, m, 0);
    }
    ledger.charge_batch(inst.active().len() as u64)?;
    let mut traj = TrajectoryBuilder::new();
    traj.observe(ledger.snapshot().since(start).rounds, best0);

    let mut cursor = oracle.inner().cursor();
    let mut solution: Vec<ElementId> = Vec::new();
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
            cursor.insert(x);
            solution.push(x);
            solution_cost += costs[x];
            running += bound;
            picks += 1;
            traj.observe(ledger.snapshot().since(start).rounds, running);
        } else {
            heap.note_refresh();
            let m = cursor.marginal(x);
            ledger.charge_batch(1)?;
            heap.push(x, m, picks);
        }
    }

    finish(inst, &oracle, solution, solution_cost, ledger, start, clock, traj)
}

/// Naive greedy: one batch per pick over every element that still fits.
/// The reference the lazy version is tested against.
pub fn greedy_naive<F: SetFunction>(
    inst: &Instance<F>,
    ledger: &mut QueryLedger,
) -> Result<RunResult> {
    let clock = Instant::now();
    let oracle = Oracle::new(inst.objective())?;
    let costs = inst.costs();
    let budget = inst.budget();
    let start = ledger.snapshot();

    let mut cursor = oracle.inner().cursor();
    let mut live: Vec<ElementId> = inst.active().to_vec();
    let mut solution: Vec<ElementId> = Vec::new();
    let mut solution_cost = 0.0f64;
    let mut running = 0.0f64;
    let mut traj = TrajectoryBuilder::new();

    loop {
        live.retain(|&x| solution_cost + costs[x] <= budget);
        if live.is_empty() {
            break;
        }
        let mut best: Option<(ElementId, f64)> = None;
        for &x in &live {
            let m = cursor.marginal(x);
            if best.is_none() || m > best.unwrap().1 {
                best = Some((x, m));
            }
        }
        ledger.charge_batch(live.len() as u64)?;
        let (x, m) = best.unwrap();
        traj.observe(ledger.snapshot().since(start).rounds, running + m.max(0.0));
        if m <= 0.0 {
            break;
        }
        cursor.insert(x);
        solution.push(x);
        solution_cost += costs[x];
        running += m;
        live.retain(|&y| y != x);
    }

    finish(inst, &oracle, solution, solution_cost, ledger, start, clock, traj)
}

pub(super) fn finish<F: SetFunction>(
    inst: &Instance<F>,
    oracle: &Oracle<'_, F>,
    mut solution: Vec<ElementId>,
    solution_cost: f64,
    ledger: &mut QueryLedger,
    start: crate::oracle::LedgerSnapshot,
    clock: Instant,
    mut traj: TrajectoryBuilder,
) -> Result<RunResult> {
    solution.sort_unstable();
    let value = oracle.evaluate_batch(ledger, std::slice::from_ref(&solution))?[0];
    let usage = ledger.snapshot().since(start);
    assert!(inst.is_feasible(&solution), "baseline produced an infeasible set");
    traj.observe(usage.rounds, value);
    Ok(RunResult {
        solution,
        value,
        cost: solution_cost,
        usage,
        winner: Winner::Direct,
        wall_ms: clock.elapsed().as_secs_f64() * 1e3,
        notes: Vec::new(),
        trajectory: traj.finish(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_erdos_renyi, gen_movie, CostKind, CostModel};
    use crate::objectives::{CutObjective, ModularObjective, MovieObjective, WeightedGraph};
    use rand::SeedableRng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0)
    }

    #[test]
    fn modular_unit_costs_takes_top_values() {
        let f = ModularObjective::new(vec![3.0, 2.0, 1.0]);
        let cm = CostModel::explicit(vec![1.0; 3], 2.0).unwrap();
        let inst = Instance::knapsack(f, cm).unwrap();
        let mut ledger = QueryLedger::root();
        let out = greedy(&inst, &mut ledger, &mut rng()).unwrap();
        assert_eq!(out.solution, vec![0, 1]);
        assert!((out.value - 5.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_cut_stops_at_one_vertex() {
        // Unit triangle: any first vertex cuts 2.0; afterwards both other
        // vertices have marginal 0, which is not positive, so greedy stops.
        let g = WeightedGraph::new(3, vec![(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap();
        let f = CutObjective::new(g);
        let cm = CostModel::explicit(vec![1.0; 3], 3.0).unwrap();
        let inst = Instance::knapsack(f, cm).unwrap();
        let mut ledger = QueryLedger::root();
        let out = greedy(&inst, &mut ledger, &mut rng()).unwrap();
        assert_eq!(out.solution, vec![0]);
        assert!((out.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn unaffordable_element_is_skipped_for_a_cheaper_one() {
        let f = ModularObjective::new(vec![5.0, 3.0, 1.0]);
        let cm = CostModel::explicit(vec![1.5, 1.2, 0.5], 2.0).unwrap();
        let inst = Instance::knapsack(f, cm).unwrap();
        let mut ledger = QueryLedger::root();
        let out = greedy(&inst, &mut ledger, &mut rng()).unwrap();
        assert_eq!(out.solution, vec![0, 2]);
        assert!((out.value - 6.0).abs() < 1e-12);
    }

    #[test]
    fn lazy_matches_naive_on_random_instances() {
        for seed in 0..8u64 {
            let g = gen_erdos_renyi(26, 0.25, 1300 + seed).unwrap();
            let incident = g.incident_weights();
            let f = CutObjective::new(g);
            let cm = CostModel::assign(
                CostKind::IncidentProportional,
                0.35,
                26,
                Some(&incident),
                seed,
            )
            .unwrap();
            let inst = Instance::knapsack(f, cm).unwrap();

            let mut lazy_ledger = QueryLedger::root();
            let lazy = greedy(&inst, &mut lazy_ledger, &mut rng()).unwrap();
            let mut naive_ledger = QueryLedger::root();
            let naive = greedy_naive(&inst, &mut naive_ledger).unwrap();

            assert_eq!(lazy.solution, naive.solution, "seed {seed}");
            assert_eq!(lazy.value, naive.value);
            assert!(
                lazy.usage.queries <= naive.usage.queries,
                "laziness saved nothing: {} vs {}",
                lazy.usage.queries,
                naive.usage.queries
            );
        }
        for seed in 0..4u64 {
            let mi = gen_movie(22, 0.3, 4, 0.6, 0.4, 0.35, 0.25, 60 + seed).unwrap();
            let f = MovieObjective::new(mi);
            let cm = CostModel::assign(CostKind::Uniform01, 0.3, 22, None, 90 + seed).unwrap();
            let inst = Instance::knapsack(f, cm).unwrap();
            let mut l1 = QueryLedger::root();
            let lazy = greedy(&inst, &mut l1, &mut rng()).unwrap();
            let mut l2 = QueryLedger::root();
            let naive = greedy_naive(&inst, &mut l2).unwrap();
            assert_eq!(lazy.solution, naive.solution, "movie seed {seed}");
        }
    }

    #[test]
    fn path_instance_needs_linear_rounds() {
        // Path graph, unit costs, budget n: greedy keeps finding positive
        // marginals (an independent set), one adaptive pick at a time.
        let n = 40;
        let edges: Vec<(usize, usize, f64)> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
        let g = WeightedGraph::new(n, edges).unwrap();
        let f = CutObjective::new(g);
        let cm = CostModel::explicit(vec![1.0; n], n as f64).unwrap();
        let inst = Instance::knapsack(f, cm).unwrap();

        let mut lazy_ledger = QueryLedger::root();
        let lazy = greedy(&inst, &mut lazy_ledger, &mut rng()).unwrap();
        assert!(lazy.solution.len() >= n / 3);
        assert!(
            lazy.usage.rounds as usize >= n / 3,
            "lazy rounds {} too low for a sequential baseline",
            lazy.usage.rounds
        );

        let mut naive_ledger = QueryLedger::root();
        let naive = greedy_naive(&inst, &mut naive_ledger).unwrap();
        assert!(naive.usage.rounds as usize >= n / 3);
        assert_eq!(lazy.solution, naive.solution);
    }

    #[test]
    fn works_on_cardinality_instances() {
        let g = gen_erdos_renyi(18, 0.3, 7).unwrap();
        let f = CutObjective::new(g);
        let inst = Instance::cardinality(f, 5).unwrap();
        let mut ledger = QueryLedger::root();
        let out = greedy(&inst, &mut ledger, &mut rng()).unwrap();
        assert!(out.solution.len() <= 5);
        assert!(out.value > 0.0);
    }
}
