use crate::objectives::graph::{Adjacency, WeightedGraph};
use crate::oracle::{Cursor, ElementId, SetFunction};

/// Weighted cut: `f(S)` is the total weight of edges with exactly one
/// endpoint in `S`. Nonnegative, submodular, non-monotone, symmetric under
/// complement.
pub struct CutObjective {
    graph: WeightedGraph,
    adjacency: Adjacency,
    incident: Vec<f64>,
}

impl CutObjective {
    pub fn new(graph: WeightedGraph) -> Self {
        let adjacency = Adjacency::build(graph.vertex_count(), graph.edges());
        let incident = graph.incident_weights();
        CutObjective {
            graph,
            adjacency,
            incident,
        }
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }
}

pub fn cut_value(graph: &WeightedGraph, members: &[ElementId]) -> f64 {
    let mut inside = vec![false; graph.vertex_count()];
    for &x in members {
        inside[x] = true;
    }
    let mut cut = 0.0;
    for &(u, v, w) in graph.edges() {
        if inside[u] != inside[v] {
            cut += w;
        }
    }
    cut
}

impl SetFunction for CutObjective {
    type Cursor<'a> = CutCursor<'a>;

    fn ground_size(&self) -> usize {
        self.graph.vertex_count()
    }

    fn value(&self, members: &[ElementId]) -> f64 {
        cut_value(&self.graph, members)
    }

    fn cursor(&self) -> CutCursor<'_> {
        CutCursor {
            obj: self,
            inside: vec![false; self.graph.vertex_count()],
            cross: vec![0.0; self.graph.vertex_count()],
            cut: 0.0,
            members: 0,
        }
    }
}

/// Incremental cut state. `cross[x]` is the weight from `x` into the current
/// set, so a marginal is one subtraction and an insert touches only the
/// neighbors of the new vertex.
#[derive(Clone)]
pub struct CutCursor<'a> {
    obj: &'a CutObjective,
    inside: Vec<bool>,
    cross: Vec<f64>,
    cut: f64,
    members: usize,
}

impl Cursor for CutCursor<'_> {
    fn value(&self) -> f64 {
        self.cut
    }

    fn marginal(&self, x: ElementId) -> f64 {
        if self.inside[x] {
            0.0
        } else {
            self.obj.incident[x] - 2.0 * self.cross[x]
        }
    }

    fn insert(&mut self, x: ElementId) {
        if self.inside[x] {
            return;
        }
        self.cut += self.marginal(x);
        self.inside[x] = true;
        self.members += 1;
        for &(y, w) in self.obj.adjacency.row(x) {
            self.cross[y as usize] += w;
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
    use crate::oracle::check_submodular_exhaustive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn triangle() -> WeightedGraph {
        WeightedGraph::new(3, vec![(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn triangle_singleton_cuts_two_edges() {
        let g = triangle();
        assert_eq!(cut_value(&g, &[0]), 2.0);
        assert_eq!(cut_value(&g, &[]), 0.0);
        assert_eq!(cut_value(&g, &[0, 1, 2]), 0.0);
    }

    #[test]
    fn path_middle_vertex_cuts_both_edges() {
        let g = WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        assert_eq!(cut_value(&g, &[1]), 3.0);
    }

    fn random_graph(n: usize, seed: u64) -> WeightedGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(0.5) {
                    edges.push((u, v, rng.random::<f64>()));
                }
            }
        }
        WeightedGraph::new(n, edges).unwrap()
    }

    #[test]
    fn cursor_matches_scratch_evaluation() {
        let obj = CutObjective::new(random_graph(16, 21));
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let mut cursor = obj.cursor();
        let mut members: Vec<ElementId> = Vec::new();
        for _ in 0..12 {
            let x = rng.random_range(0..16);
            let grown = if members.contains(&x) {
                members.clone()
            } else {
                let mut g = members.clone();
                g.push(x);
                g
            };
            let expect = obj.value(&grown) - obj.value(&members);
            assert!((cursor.marginal(x) - expect).abs() < 1e-9);
            cursor.insert(x);
            members = grown;
            assert!((cursor.value() - obj.value(&members)).abs() < 1e-9);
        }
    }

    #[test]
    fn complement_symmetry() {
        let g = random_graph(10, 33);
        let s: Vec<ElementId> = vec![0, 3, 4, 7];
        let co: Vec<ElementId> = (0..10).filter(|x| !s.contains(x)).collect();
        assert!((cut_value(&g, &s) - cut_value(&g, &co)).abs() < 1e-12);
    }

    #[test]
    fn cut_is_submodular() {
        let obj = CutObjective::new(random_graph(6, 44));
        assert!(check_submodular_exhaustive(&obj).unwrap().holds);
    }
}
