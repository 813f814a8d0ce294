use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::objectives::{CoverageObjective, MovieInstance, RevenueInstance, WeightedGraph};
use crate::rng::mix;

/// G(n, p) with independent uniform [0,1] edge weights. Pair order is fixed
/// (u < v ascending), so a seed pins the graph exactly.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<WeightedGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParam {
            name: "p",
            value: p,
            want: "in [0, 1]",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed));
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v, rng.random::<f64>()));
            }
        }
    }
    WeightedGraph::new(n, edges)
}

/// Inverse-CDF draw from the Lomax (Pareto Type II) distribution:
/// lambda ((1-u)^(-1/alpha) - 1). Mean lambda/(alpha-1) for alpha > 1.
pub fn sample_lomax(lambda: f64, alpha: f64, u: f64) -> Result<f64> {
    if lambda <= 0.0 {
        return Err(Error::InvalidParam {
            name: "lambda",
            value: lambda,
            want: "positive",
        });
    }
    if alpha <= 0.0 {
        return Err(Error::InvalidParam {
            name: "alpha",
            value: alpha,
            want: "positive",
        });
    }
    if !(0.0..1.0).contains(&u) {
        return Err(Error::InvalidParam {
            name: "u",
            value: u,
            want: "in [0, 1)",
        });
    }
    Ok(lambda * ((1.0 - u).powf(-1.0 / alpha) - 1.0))
}

pub fn draw_lomax(lambda: f64, alpha: f64, rng: &mut ChaCha8Rng) -> f64 {
    // random::<f64>() lands in [0, 1), inside the valid domain.
    sample_lomax(lambda, alpha, rng.random::<f64>()).expect("u below 1")
}

/// Random movie instance: a G(n, edge_p) similarity graph with uniform
/// weights, one genre per movie out of `genres`, ratings uniform on (0, 5].
pub fn gen_movie(
    n: usize,
    edge_p: f64,
    genres: u32,
    alpha: f64,
    beta: f64,
    lambda: f64,
    mu: f64,
    seed: u64,
) -> Result<MovieInstance> {
    if genres == 0 {
        return Err(Error::InvalidParam {
            name: "genres",
            value: 0.0,
            want: "at least 1",
        });
    }
    let graph = gen_erdos_renyi(n, edge_p, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(mix(mix(seed) ^ 0x6d6f7669));
    let genre_of: Vec<u32> = (0..n).map(|_| rng.random_range(0..genres)).collect();
    let shared = graph
        .edges()
        .iter()
        .map(|&(u, v, _)| genre_of[u] == genre_of[v])
        .collect();
    let ratings = (0..n).map(|_| 5.0 * (1.0 - rng.random::<f64>())).collect();
    MovieInstance::new(graph, shared, ratings, alpha, beta, lambda, mu)
}

/// Random revenue instance: G(n, edge_p) influence graph, suggestibility
/// drawn Lomax(lambda, alpha).
pub fn gen_revenue(
    n: usize,
    edge_p: f64,
    lomax_lambda: f64,
    lomax_alpha: f64,
    seed: u64,
) -> Result<RevenueInstance> {
    let graph = gen_erdos_renyi(n, edge_p, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(mix(mix(seed) ^ 0x72657665));
    let a = (0..n)
        .map(|_| draw_lomax(lomax_lambda, lomax_alpha, &mut rng))
        .collect();
    RevenueInstance::new(graph, a)
}

/// Random weighted coverage instance: each of `n` elements covers every one
/// of `items` universe items independently with probability `density`; item
/// weights uniform on (0, 1].
pub fn gen_coverage(n: usize, items: usize, density: f64, seed: u64) -> Result<CoverageObjective> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed));
    let covers = (0..n)
        .map(|_| {
            (0..items as u32)
                .filter(|_| rng.random_bool(density))
                .collect()
        })
        .collect();
    let weights = (0..items).map(|_| 1.0 - rng.random::<f64>()).collect();
    CoverageObjective::new(covers, weights)
}
