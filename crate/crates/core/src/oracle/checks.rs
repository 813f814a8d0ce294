//! Verification utilities for objectives. These are test and diagnostic
//! helpers, not algorithm building blocks, so they evaluate `f` directly and
//! stay off the query ledger.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::oracle::function::{ElementId, SetFunction};
use crate::rng::mix;

/// Outcome of a submodularity check. When `holds` is false, `witness` carries
/// a violating triple `(S, T, x)` with `S ⊆ T`, `x ∉ T` and
/// `f(x | T) > f(x | S) + 1e-9`.
#[derive(Debug, Clone)]
pub struct SubmodularityReport {
    pub holds: bool,
    pub witness: Option<(Vec<ElementId>, Vec<ElementId>, ElementId)>,
    pub trials: u64,
}

const TOL: f64 = 1e-9;

fn marginal_of<F: SetFunction>(f: &F, base: &[ElementId], x: ElementId) -> f64 {
    let mut grown = base.to_vec();
    grown.push(x);
    f.value(&grown) - f.value(base)
}

/// Randomized submodularity check over `trials` sampled `(S ⊆ T, x ∉ T)`
/// triples. Deterministic in `seed`.
pub fn check_submodular<F: SetFunction>(f: &F, trials: u64, seed: u64) -> SubmodularityReport {
    assert!(trials >= 1, "need at least one trial");
    let n = f.ground_size();
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed));
    let mut done = 0u64;
    while done < trials {
        done += 1;
        let mut s = Vec::new();
        let mut t = Vec::new();
        let mut outside = Vec::new();
        for x in 0..n {
            match rng.random_range(0..4u8) {
                0 => {
                    s.push(x);
                    t.push(x);
                }
                1 => t.push(x),
                _ => outside.push(x),
            }
        }
        if outside.is_empty() {
            continue;
        }
        let x = outside[rng.random_range(0..outside.len())];
        if marginal_of(f, &t, x) > marginal_of(f, &s, x) + TOL {
            return SubmodularityReport {
                holds: false,
                witness: Some((s, t, x)),
                trials: done,
            };
        }
    }
    SubmodularityReport {
        holds: true,
        witness: None,
        trials: done,
    }
}

/// Exhaustive submodularity check over every `(S ⊆ T, x ∉ T)` triple. Only
/// viable for small ground sets; refuses n > 12.
pub fn check_submodular_exhaustive<F: SetFunction>(f: &F) -> Result<SubmodularityReport> {
    let n = f.ground_size();
    if n > 12 {
        return Err(Error::contract(
            "check_submodular_exhaustive",
            format!("ground set of {n} elements is too large for 3^n enumeration"),
        ));
    }
    let members = |mask: u32| -> Vec<ElementId> { (0..n).filter(|&i| mask >> i & 1 == 1).collect() };
    let mut trials = 0u64;
    for t_mask in 0..1u32 << n {
        let t = members(t_mask);
        let f_t = f.value(&t);
        // Iterate submasks of t_mask, including the empty set.
        let mut s_mask = t_mask;
        loop {
            let s = members(s_mask);
            let f_s = f.value(&s);
            for x in 0..n {
                if t_mask >> x & 1 == 1 {
                    continue;
                }
                trials += 1;
                let mut t_x = t.clone();
                t_x.push(x);
                let mut s_x = s.clone();
                s_x.push(x);
                if f.value(&t_x) - f_t > f.value(&s_x) - f_s + TOL {
                    return Ok(SubmodularityReport {
                        holds: false,
                        witness: Some((s, t, x)),
                        trials,
                    });
                }
            }
            if s_mask == 0 {
                break;
            }
            s_mask = (s_mask - 1) & t_mask;
        }
    }
    Ok(SubmodularityReport {
        holds: true,
        witness: None,
        trials,
    })
}

/// Monte-Carlo check of the subsampling bound: for `X_p` containing each
/// element of `x_set` independently with probability `p`,
/// `E[f(X_p)] ≥ (1−p)·f(∅)`. `holds` allows three standard errors of slack.
#[derive(Debug, Clone)]
pub struct SamplingLemmaReport {
    pub estimate: f64,
    pub bound: f64,
    pub std_err: f64,
    pub holds: bool,
    pub trials: u64,
}

pub fn check_sampling_lemma<F: SetFunction>(
    f: &F,
    x_set: &[ElementId],
    p: f64,
    trials: u64,
    seed: u64,
) -> SamplingLemmaReport {
    assert!((0.0..=1.0).contains(&p), "p must be a probability");
    assert!(trials >= 1, "need at least one trial");
    let f_empty = f.value(&[]);
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed));
    let mut mean = 0.0f64;
    let mut m2 = 0.0f64;
    let mut sample = Vec::with_capacity(x_set.len());
    for t in 1..=trials {
        sample.clear();
        for &x in x_set {
            if rng.random_bool(p) {
                sample.push(x);
            }
        }
        let v = f.value(&sample);
        let delta = v - mean;
        mean += delta / t as f64;
        m2 += delta * (v - mean);
    }
    let var = if trials > 1 { m2 / (trials - 1) as f64 } else { 0.0 };
    let std_err = (var / trials as f64).sqrt();
    let bound = (1.0 - p) * f_empty;
    SamplingLemmaReport {
        estimate: mean,
        bound,
        std_err,
        holds: mean >= bound - 3.0 * std_err,
        trials,
    }
}

/// Randomized monotonicity probe: samples `(S, x ∉ S)` pairs and fails on the
/// first marginal below −1e-9.
pub fn check_monotone<F: SetFunction>(f: &F, trials: u64, seed: u64) -> Result<()> {
    assert!(trials >= 1, "need at least one trial");
    let n = f.ground_size();
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed));
    for _ in 0..trials {
        let mut s = Vec::new();
        let mut outside = Vec::new();
        for x in 0..n {
            if rng.random_bool(0.5) {
                s.push(x);
            } else {
                outside.push(x);
            }
        }
        if outside.is_empty() {
            continue;
        }
        let x = outside[rng.random_range(0..outside.len())];
        let m = marginal_of(f, &s, x);
        if m < -TOL {
            return Err(Error::NotMonotone {
                element: x,
                base_len: s.len(),
                marginal: m,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::function::FnSetFunction;

    fn triangle_cut() -> FnSetFunction<impl Fn(&[ElementId]) -> f64 + Send + Sync> {
        FnSetFunction::new(3, |s: &[ElementId]| {
            let inside = |v: usize| s.contains(&v);
            [(0usize, 1usize), (0, 2), (1, 2)]
                .iter()
                .filter(|&&(a, b)| inside(a) != inside(b))
                .count() as f64
        })
    }

    #[test]
    fn modular_is_submodular() {
        let f = FnSetFunction::new(5, |s: &[ElementId]| s.len() as f64);
        assert!(check_submodular(&f, 2000, 7).holds);
        assert!(check_submodular_exhaustive(&f).unwrap().holds);
    }

    #[test]
    fn triangle_cut_is_submodular() {
        let f = triangle_cut();
        let report = check_submodular_exhaustive(&f).unwrap();
        assert!(report.holds);
        assert!(report.witness.is_none());
    }

    #[test]
    fn squared_cardinality_is_supermodular() {
        let f = FnSetFunction::new(3, |s: &[ElementId]| (s.len() * s.len()) as f64);
        let report = check_submodular_exhaustive(&f).unwrap();
        assert!(!report.holds);
        // First triple in enumeration order: S=∅, T={0}, x=1 with
        // f(1|{0}) = 3 > f(1|∅) = 1.
        let (s, t, x) = report.witness.unwrap();
        assert!(s.is_empty());
        assert_eq!(t, vec![0]);
        assert_eq!(x, 1);
        assert!(!check_submodular(&f, 2000, 11).holds);
    }

    #[test]
    fn randomized_witness_is_a_real_violation() {
        let f = FnSetFunction::new(4, |s: &[ElementId]| (s.len() * s.len()) as f64);
        let report = check_submodular(&f, 2000, 3);
        let (s, t, x) = report.witness.expect("supermodular f must fail");
        assert!(marginal_of(&f, &t, x) > marginal_of(&f, &s, x) + TOL);
    }

    #[test]
    fn sampling_bound_on_triangle_cut() {
        let f = triangle_cut();
        let report = check_sampling_lemma(&f, &[0, 1, 2], 0.5, 10_000, 5);
        assert!(report.holds);
        assert_eq!(report.bound, 0.0);
        // Each of the three edges is cut with probability 1/2.
        assert!((report.estimate - 1.5).abs() <= 3.0 * report.std_err);
    }

    #[test]
    fn sampling_bound_at_p_zero_is_exact() {
        let f = FnSetFunction::new(3, |s: &[ElementId]| 4.0 - s.len() as f64);
        let report = check_sampling_lemma(&f, &[0, 1, 2], 0.0, 100, 5);
        assert!(report.holds);
        assert_eq!(report.estimate, 4.0);
        assert_eq!(report.bound, 4.0);
    }

    #[test]
    fn monotone_probe_accepts_modular_and_rejects_cut() {
        let f = FnSetFunction::new(5, |s: &[ElementId]| s.len() as f64);
        assert!(check_monotone(&f, 2000, 9).is_ok());
        let cut = triangle_cut();
        let err = check_monotone(&cut, 2000, 9).unwrap_err();
        assert!(matches!(err, Error::NotMonotone { .. }));
    }
}
