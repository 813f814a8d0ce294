//! Constant-factor unconstrained maximization in two adaptive rounds.
//!
//! A uniformly random subset R of the pool satisfies E[f(R)] >= OPT/4 for any
//! nonnegative submodular f, so drawing several independent copies and
//! keeping the best of {empty set, best singleton, R_1, ..., R_r} boosts the
//! failure probability down without adding rounds: one round prices the
//! singletons, one prices the samples.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::oracle::{ElementId, Oracle, QueryLedger, SetFunction};

#[derive(Debug, Clone, PartialEq)]
pub struct UnconstrainedOutcome {
    pub solution: Vec<ElementId>,
    pub value: f64,
}

pub fn unconstrained_max<F: SetFunction>(
    oracle: &Oracle<'_, F>,
    pool: &[ElementId],
    samples: usize,
    ledger: &mut QueryLedger,
    rng: &mut ChaCha8Rng,
) -> Result<UnconstrainedOutcome> {
    if samples == 0 {
        return Err(Error::InvalidParam {
            name: "samples",
            value: 0.0,
            want: "at least one sampled subset",
        });
    }

    let singletons: Vec<Vec<ElementId>> = pool.iter().map(|&x| vec![x]).collect();
    let singleton_vals = oracle.evaluate_batch(ledger, &singletons)?;

    let mut batch: Vec<Vec<ElementId>> = Vec::with_capacity(samples + 1);
    batch.push(Vec::new());
    if pool.is_empty() {
        // Nothing to sample from; only the empty set is priced.
        let vals = oracle.evaluate_batch(ledger, &batch)?;
        return Ok(UnconstrainedOutcome {
            solution: Vec::new(),
            value: vals[0],
        });
    }
    for _ in 0..samples {
        let r: Vec<ElementId> = pool.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
        batch.push(r);
    }
    let vals = oracle.evaluate_batch(ledger, &batch)?;

    let mut best_set: &[ElementId] = &[];
    let mut best_value = vals[0];
    if let Some((idx, &v)) = singleton_vals
        .iter()
        .enumerate()
        .reduce(|a, b| if b.1 > a.1 { b } else { a })
    {
        if v > best_value {
            best_value = v;
            best_set = &singletons[idx];
        }
    }
    for (i, v) in vals.iter().enumerate().skip(1) {
        if *v > best_value {
            best_value = *v;
            best_set = &batch[i];
        }
    }
    Ok(UnconstrainedOutcome {
        solution: best_set.to_vec(),
        value: best_value,
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

    #[test]
    fn triangle_finds_a_proper_cut() {
        let g = WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let f = CutObjective::new(g);
        let oracle = Oracle::new(&f).unwrap();
        let mut ledger = QueryLedger::root();
        let out =
            unconstrained_max(&oracle, &[0, 1, 2], 8, &mut ledger, &mut rng(31)).unwrap();
        // Best cut on the triangle is 2, reached by any single vertex (or
        // pair); the singleton round alone guarantees it.
        assert_eq!(out.value, 2.0);
        assert_eq!(f.value(&out.solution), 2.0);
        assert_eq!(ledger.rounds(), 2);
        assert_eq!(ledger.queries(), 3 + 8 + 1);
    }

    #[test]
    fn positive_modular_weights_favor_large_samples() {
        let f = ModularObjective::new(vec![1.0; 8]);
        let oracle = Oracle::new(&f).unwrap();
        let mut ledger = QueryLedger::root();
        let out = unconstrained_max(
            &oracle,
            &[0, 1, 2, 3, 4, 5, 6, 7],
            16,
            &mut ledger,
            &mut rng(32),
        )
        .unwrap();
        // A coin-flip subset of eight unit weights stays at size <= 1 with
        // probability 9/256, so sixteen independent samples all failing to
        // beat the best singleton has probability (9/256)^16.
        assert!(out.value > 1.0, "best sample only reached {}", out.value);
        assert_eq!(f.value(&out.solution), out.value);
    }

    #[test]
    fn empty_pool_returns_the_empty_set() {
        let f = ModularObjective::new(vec![1.0; 4]);
        let oracle = Oracle::new(&f).unwrap();
        let mut ledger = QueryLedger::root();
        let out = unconstrained_max(&oracle, &[], 4, &mut ledger, &mut rng(33)).unwrap();
        assert!(out.solution.is_empty());
        assert_eq!(out.value, 0.0);
        assert_eq!(ledger.rounds(), 1);
        assert_eq!(ledger.queries(), 1);
    }

    #[test]
    fn zero_samples_is_rejected() {
        let f = ModularObjective::new(vec![1.0; 2]);
        let oracle = Oracle::new(&f).unwrap();
        let mut ledger = QueryLedger::root();
        assert!(unconstrained_max(&oracle, &[0], 0, &mut ledger, &mut rng(34)).is_err());
    }
}
