use crate::error::{Error, Result};
use crate::oracle::ElementId;

/// Undirected weighted graph on dense vertex ids `0..n`.
///
/// Edges are stored once per unordered pair. Construction validates the
/// invariants every objective relies on: no self-loops, no duplicate pairs,
/// finite nonnegative weights.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(ElementId, ElementId, f64)>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<(ElementId, ElementId, f64)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for &(u, v, w) in &edges {
            if u >= n || v >= n {
                return Err(Error::ElementOutOfRange { id: u.max(v), n });
            }
            if u == v {
                return Err(Error::contract("graph", format!("self-loop at vertex {u}")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::contract(
                    "graph",
                    format!("edge ({u},{v}) has weight {w}, want finite nonnegative"),
                ));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::contract(
                    "graph",
                    format!("duplicate edge between {u} and {v}"),
                ));
            }
        }
        Ok(WeightedGraph { n, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(ElementId, ElementId, f64)] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|&(_, _, w)| w).sum()
    }

    /// Sum of incident edge weights per vertex (the weighted degree).
    pub fn incident_weights(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for &(u, v, w) in &self.edges {
            out[u] += w;
            out[v] += w;
        }
        out
    }
}

/// Compressed adjacency built once per objective; each undirected edge
/// appears in both endpoint rows.
#[derive(Debug, Clone)]
pub struct Adjacency {
    offsets: Vec<usize>,
    neighbors: Vec<(u32, f64)>,
}

impl Adjacency {
    pub fn build(n: usize, edges: &[(ElementId, ElementId, f64)]) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v, _) in edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![(0u32, 0.0f64); acc];
        for &(u, v, w) in edges {
            neighbors[cursor[u]] = (v as u32, w);
            cursor[u] += 1;
            neighbors[cursor[v]] = (u as u32, w);
            cursor[v] += 1;
        }
        Adjacency { offsets, neighbors }
    }

    pub fn row(&self, v: ElementId) -> &[(u32, f64)] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }
}
