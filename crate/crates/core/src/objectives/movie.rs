use crate::error::{Error, Result};
use crate::objectives::graph::WeightedGraph;
use crate::oracle::{Cursor, ElementId, SetFunction};

/// Movie recommendation objective: a rating term plus a diversity term that
/// rewards similarity mass toward the whole catalog and penalizes similarity
/// inside the selection, with a stiffer penalty for same-genre pairs.
///
/// v(S) = alpha Σ_{i∈S} r_i
///      + beta (Σ_{i∈S} Σ_{j} w_ij − Σ_{i∈S} Σ_{j∈S} (lambda + chi_ij mu) w_ij)
///
/// Both double sums run over ordered pairs; the similarity diagonal is zero,
/// so with lambda = 1, mu = 0, alpha = 0, beta = 1 this is exactly the
/// weighted cut of the similarity graph. Values can go negative for large,
/// homogeneous selections; callers who need nonnegativity must screen their
/// instances.
pub struct MovieInstance {
    graph: WeightedGraph,
    shared_genre: Vec<bool>,
    ratings: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub mu: f64,
}

impl MovieInstance {
    pub fn new(
        graph: WeightedGraph,
        shared_genre: Vec<bool>,
        ratings: Vec<f64>,
        alpha: f64,
        beta: f64,
        lambda: f64,
        mu: f64,
    ) -> Result<Self> {
        if shared_genre.len() != graph.edge_count() {
            return Err(Error::contract(
                "movie",
                format!(
                    "{} genre flags for {} similarity edges",
                    shared_genre.len(),
                    graph.edge_count()
                ),
            ));
        }
        if ratings.len() != graph.vertex_count() {
            return Err(Error::contract(
                "movie",
                format!(
                    "{} ratings for {} movies",
                    ratings.len(),
                    graph.vertex_count()
                ),
            ));
        }
        for (name, v) in [
            ("alpha", alpha),
            ("beta", beta),
            ("lambda", lambda),
            ("mu", mu),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParam {
                    name,
                    value: v,
                    want: "finite nonnegative",
                });
            }
        }
        if let Some(&r) = ratings.iter().find(|r| !r.is_finite() || **r < 0.0) {
            return Err(Error::contract("movie", format!("rating {r} out of range")));
        }
        Ok(MovieInstance {
            graph,
            shared_genre,
            ratings,
            alpha,
            beta,
            lambda,
            mu,
        })
    }

    /// Build from per-movie tag vectors and genre lists: similarity is the
    /// min-overlap norm of the tag vectors, and a pair shares a genre when
    /// the genre lists intersect.
    pub fn from_tags(
        tags: &[Vec<f64>],
        genres: &[Vec<u32>],
        ratings: Vec<f64>,
        alpha: f64,
        beta: f64,
        lambda: f64,
        mu: f64,
    ) -> Result<Self> {
        let n = tags.len();
        if genres.len() != n {
            return Err(Error::contract(
                "movie",
                format!("{} genre lists for {n} tag vectors", genres.len()),
            ));
        }
        let mut edges = Vec::new();
        let mut shared = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let w = movie_similarity(&tags[i], &tags[j])?;
                if w > 0.0 {
                    edges.push((i, j, w));
                    shared.push(genres[i].iter().any(|g| genres[j].contains(g)));
                }
            }
        }
        let graph = WeightedGraph::new(n, edges)?;
        MovieInstance::new(graph, shared, ratings, alpha, beta, lambda, mu)
    }

    pub fn movie_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn similarity_graph(&self) -> &WeightedGraph {
        &self.graph
    }

    fn penalty_weight(&self, edge: usize) -> f64 {
        let (_, _, w) = self.graph.edges()[edge];
        let chi = if self.shared_genre[edge] { self.mu } else { 0.0 };
        (self.lambda + chi) * w
    }
}

/// sqrt(Σ_k min(t_i[k], t_j[k])²): overlap-based similarity of two tag
/// vectors.
pub fn movie_similarity(tags_i: &[f64], tags_j: &[f64]) -> Result<f64> {
    if tags_i.len() != tags_j.len() {
        return Err(Error::contract(
            "movie_similarity",
            format!("tag vectors of lengths {} and {}", tags_i.len(), tags_j.len()),
        ));
    }
    let sum: f64 = tags_i
        .iter()
        .zip(tags_j)
        .map(|(&a, &b)| {
            let m = a.min(b);
            m * m
        })
        .sum();
    Ok(sum.sqrt())
}

pub fn movie_value(m: &MovieInstance, members: &[ElementId]) -> f64 {
    let n = m.movie_count();
    let mut inside = vec![false; n];
    for &x in members {
        inside[x] = true;
    }
    let row_totals = m.graph.incident_weights();
    let mut v = 0.0;
    for x in 0..n {
        if inside[x] {
            v += m.alpha * m.ratings[x] + m.beta * row_totals[x];
        }
    }
    for (e, &(u, w_v, _)) in m.graph.edges().iter().enumerate() {
        if inside[u] && inside[w_v] {
            // The ordered double sum counts every inside pair twice.
            v -= m.beta * 2.0 * m.penalty_weight(e);
        }
    }
    v
}

/// Evaluation wrapper with precomputed row totals and a penalty-weighted
/// adjacency for incremental cursors.
pub struct MovieObjective {
    inst: MovieInstance,
    row_totals: Vec<f64>,
    offsets: Vec<usize>,
    neighbors: Vec<(u32, f64)>,
}

impl MovieObjective {
    pub fn new(inst: MovieInstance) -> Self {
        let n = inst.movie_count();
        let row_totals = inst.graph.incident_weights();
        let mut degree = vec![0usize; n];
        for &(u, v, _) in inst.graph.edges() {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![(0u32, 0.0); acc];
        for (e, &(u, v, _)) in inst.graph.edges().iter().enumerate() {
            let pw = inst.penalty_weight(e);
            neighbors[cursor[u]] = (v as u32, pw);
            cursor[u] += 1;
            neighbors[cursor[v]] = (u as u32, pw);
            cursor[v] += 1;
        }
        MovieObjective {
            inst,
            row_totals,
            offsets,
            neighbors,
        }
    }

    pub fn instance(&self) -> &MovieInstance {
        &self.inst
    }

    fn penalty_row(&self, x: ElementId) -> &[(u32, f64)] {
        &self.neighbors[self.offsets[x]..self.offsets[x + 1]]
    }
}

impl SetFunction for MovieObjective {
    type Cursor<'a> = MovieCursor<'a>;

    fn ground_size(&self) -> usize {
        self.inst.movie_count()
    }

    fn value(&self, members: &[ElementId]) -> f64 {
        movie_value(&self.inst, members)
    }

    fn cursor(&self) -> MovieCursor<'_> {
        MovieCursor {
            obj: self,
            inside: vec![false; self.inst.movie_count()],
            penalty_to_set: vec![0.0; self.inst.movie_count()],
            value: 0.0,
            members: 0,
        }
    }
}

/// `penalty_to_set[x]` tracks Σ_{j∈S} (lambda + chi_xj mu) w_xj, making the
/// marginal a constant-time expression.
#[derive(Clone)]
pub struct MovieCursor<'a> {
    obj: &'a MovieObjective,
    inside: Vec<bool>,
    penalty_to_set: Vec<f64>,
    value: f64,
    members: usize,
}

impl Cursor for MovieCursor<'_> {
    fn value(&self) -> f64 {
        self.value
    }

    fn marginal(&self, x: ElementId) -> f64 {
        if self.inside[x] {
            return 0.0;
        }
        let inst = &self.obj.inst;
        inst.alpha * inst.ratings[x]
            + inst.beta * (self.obj.row_totals[x] - 2.0 * self.penalty_to_set[x])
    }

    fn insert(&mut self, x: ElementId) {
        if self.inside[x] {
            return;
        }
        self.value += self.marginal(x);
        self.inside[x] = true;
        self.members += 1;
        for &(y, pw) in self.obj.penalty_row(x) {
            self.penalty_to_set[y as usize] += pw;
        }
    }

    fn contains(&self, x: ElementId) -> bool {
        self.inside[x]
    }

    fn len(&self) -> usize {
        self.members
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::cut::cut_value;
    use crate::oracle::check_submodular;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn two_movie_instance() -> MovieInstance {
        let graph = WeightedGraph::new(2, vec![(0, 1, 1.0)]).unwrap();
        MovieInstance::new(graph, vec![false], vec![1.0, 1.0], 0.5, 0.5, 3.0, 7.0).unwrap()
    }

    #[test]
    fn hand_expanded_values() {
        let m = two_movie_instance();
        assert_eq!(movie_value(&m, &[]), 0.0);
        assert_eq!(movie_value(&m, &[0]), 1.0);
        assert_eq!(movie_value(&m, &[0, 1]), -1.0);
    }

    #[test]
    fn similarity_examples() {
        assert_eq!(movie_similarity(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(movie_similarity(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        let v = movie_similarity(&[0.6, 0.8], &[0.8, 0.6]).unwrap();
        assert!((v - 0.72f64.sqrt()).abs() < 1e-12);
        assert!(movie_similarity(&[1.0], &[1.0, 0.0]).is_err());
    }

    fn random_instance(n: usize, seed: u64, alpha: f64, beta: f64, lambda: f64, mu: f64) -> MovieInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        let mut shared = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(0.7) {
                    edges.push((i, j, rng.random::<f64>()));
                    shared.push(rng.random_bool(0.3));
                }
            }
        }
        let ratings = (0..n).map(|_| rng.random::<f64>() * 5.0).collect();
        let graph = WeightedGraph::new(n, edges).unwrap();
        MovieInstance::new(graph, shared, ratings, alpha, beta, lambda, mu).unwrap()
    }

    #[test]
    fn reduces_to_cut_without_rating_and_genre_terms() {
        let m = random_instance(8, 5, 0.0, 1.0, 1.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let s: Vec<ElementId> = (0..8).filter(|_| rng.random_bool(0.5)).collect();
            let expect = cut_value(m.similarity_graph(), &s);
            assert!((movie_value(&m, &s) - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn cursor_matches_scratch_evaluation() {
        let obj = MovieObjective::new(random_instance(12, 9, 0.5, 0.5, 3.0, 7.0));
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut cursor = obj.cursor();
        let mut members: Vec<ElementId> = Vec::new();
        for _ in 0..10 {
            let x = rng.random_range(0..12);
            if !cursor.contains(x) {
                let mut grown = members.clone();
                grown.push(x);
                let expect = obj.value(&grown) - obj.value(&members);
                assert!((cursor.marginal(x) - expect).abs() < 1e-9);
                members = grown;
            }
            cursor.insert(x);
            assert!((cursor.value() - obj.value(&members)).abs() < 1e-9);
        }
    }

    #[test]
    fn movie_objective_is_submodular() {
        let obj = MovieObjective::new(random_instance(10, 13, 0.5, 0.5, 3.0, 7.0));
        assert!(check_submodular(&obj, 3000, 14).holds);
    }

    #[test]
    fn from_tags_builds_similarity_edges() {
        let tags = vec![vec![1.0, 0.0], vec![0.8, 0.0], vec![0.0, 1.0]];
        let genres = vec![vec![0], vec![0, 1], vec![1]];
        let m = MovieInstance::from_tags(&tags, &genres, vec![1.0; 3], 0.5, 0.5, 3.0, 7.0).unwrap();
        // Movies 0 and 1 overlap on the first tag; movie 2 is disjoint from 0.
        let edges = m.similarity_graph().edges();
        assert_eq!(edges.len(), 1);
        assert_eq!(edges[0].0, 0);
        assert_eq!(edges[0].1, 1);
        assert!((edges[0].2 - 0.8).abs() < 1e-12);
        assert!(m.shared_genre[0]);
    }
}
