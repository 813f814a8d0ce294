use crate::error::{Error, Result};
use crate::objectives::graph::{Adjacency, WeightedGraph};
use crate::oracle::{Cursor, ElementId, SetFunction};

/// Revenue objective on a social network: seeding `S` with a product earns,
/// from every non-seed user, their suggestibility times the square root of
/// the influence weight flowing in from `S`.
///
/// v(S) = Σ_{i∉S} suggestibility_i · sqrt(Σ_{j∈S} w_ij)
///
/// Nonnegative and submodular but non-monotone: moving a user into `S`
/// forfeits their own purchase.
pub struct RevenueInstance {
    graph: WeightedGraph,
    suggestibility: Vec<f64>,
}

impl RevenueInstance {
    pub fn new(graph: WeightedGraph, suggestibility: Vec<f64>) -> Result<Self> {
        if suggestibility.len() != graph.vertex_count() {
            return Err(Error::contract(
                "revenue",
                format!(
                    "{} suggestibility values for {} users",
                    suggestibility.len(),
                    graph.vertex_count()
                ),
            ));
        }
        if let Some(&a) = suggestibility.iter().find(|a| !a.is_finite() || **a < 0.0) {
            return Err(Error::contract(
                "revenue",
                format!("suggestibility {a} out of range"),
            ));
        }
        Ok(RevenueInstance {
            graph,
            suggestibility,
        })
    }

    pub fn user_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn suggestibility(&self) -> &[f64] {
        &self.suggestibility
    }
}

pub fn revenue_value(rv: &RevenueInstance, members: &[ElementId]) -> f64 {
    let n = rv.user_count();
    let mut inside = vec![false; n];
    for &x in members {
        inside[x] = true;
    }
    let mut inflow = vec![0.0f64; n];
    for &(u, v, w) in rv.graph.edges() {
        if inside[u] && !inside[v] {
            inflow[v] += w;
        }
        if inside[v] && !inside[u] {
            inflow[u] += w;
        }
    }
    (0..n)
        .filter(|&i| !inside[i])
        .map(|i| rv.suggestibility[i] * inflow[i].sqrt())
        .sum()
}

pub struct RevenueObjective {
    inst: RevenueInstance,
    adjacency: Adjacency,
}

impl RevenueObjective {
    pub fn new(inst: RevenueInstance) -> Self {
        let adjacency = Adjacency::build(inst.user_count(), inst.graph.edges());
        RevenueObjective { inst, adjacency }
    }

    pub fn instance(&self) -> &RevenueInstance {
        &self.inst
    }
}

impl SetFunction for RevenueObjective {
    type Cursor<'a> = RevenueCursor<'a>;

    fn ground_size(&self) -> usize {
        self.inst.user_count()
    }

    fn value(&self, members: &[ElementId]) -> f64 {
        revenue_value(&self.inst, members)
    }

    fn cursor(&self) -> RevenueCursor<'_> {
        RevenueCursor {
            obj: self,
            inside: vec![false; self.inst.user_count()],
            inflow: vec![0.0; self.inst.user_count()],
            value: 0.0,
            members: 0,
        }
    }
}

/// `inflow[y]` tracks Σ_{j∈S} w_yj for every user, inside or out; only
/// outside users contribute to the value. A marginal walks the candidate's
/// neighborhood once.
#[derive(Clone)]
pub struct RevenueCursor<'a> {
    obj: &'a RevenueObjective,
    inside: Vec<bool>,
    inflow: Vec<f64>,
    value: f64,
    members: usize,
}

impl Cursor for RevenueCursor<'_> {
    fn value(&self) -> f64 {
        self.value
    }

    fn marginal(&self, x: ElementId) -> f64 {
        if self.inside[x] {
            return 0.0;
        }
        let a = &self.obj.inst.suggestibility;
        let mut delta = -a[x] * self.inflow[x].sqrt();
        for &(y, w) in self.obj.adjacency.row(x) {
            let y = y as usize;
            if !self.inside[y] {
                delta += a[y] * ((self.inflow[y] + w).sqrt() - self.inflow[y].sqrt());
            }
        }
        delta
    }

    fn insert(&mut self, x: ElementId) {
        if self.inside[x] {
            return;
        }
        self.value += self.marginal(x);
        self.inside[x] = true;
        self.members += 1;
        for &(y, w) in self.obj.adjacency.row(x) {
            self.inflow[y as usize] += w;
        }
    }

    fn contains(&self, x: ElementId) -> bool {
        self.inside[x]
    }

    fn len(&self) -> usize {
        self.members
    }
}
