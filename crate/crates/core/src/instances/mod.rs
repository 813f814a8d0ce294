//! Problem instances: an objective paired with a knapsack or cardinality
//! constraint, plus seeded generators and file ingestion. Instances are
//! immutable once built; the same seed reproduces them bit for bit.

mod cost;
mod gen;
mod io;

pub use cost::{CostKind, CostModel};
pub use gen::{
    draw_lomax, gen_coverage, gen_erdos_renyi, gen_movie, gen_revenue, sample_lomax,
};
pub use io::{load_graph_csv, load_tag_matrix, TagMatrix};

use crate::error::{Error, Result};
use crate::oracle::{ElementId, SetFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    Knapsack,
    Cardinality { k: usize },
}

/// An objective under one constraint. A cardinality bound is carried as unit
/// costs with budget k, which is exactly how the algorithms consume it; the
/// kind is kept so reports can tell the two apart.
pub struct Instance<F: SetFunction> {
    objective: F,
    kind: ConstraintKind,
    costs: Vec<f64>,
    budget: f64,
    active: Vec<ElementId>,
    cost_model: Option<CostModel>,
}

impl<F: SetFunction> Instance<F> {
    pub fn knapsack(objective: F, cost_model: CostModel) -> Result<Self> {
        let n = objective.ground_size();
        if cost_model.costs().len() != n {
            return Err(Error::contract(
                "instance",
                format!(
                    "{} costs for a ground set of {n} elements",
                    cost_model.costs().len()
                ),
            ));
        }
        Ok(Instance {
            objective,
            kind: ConstraintKind::Knapsack,
            costs: cost_model.costs().to_vec(),
            budget: cost_model.budget(),
            active: cost_model.active().to_vec(),
            cost_model: Some(cost_model),
        })
    }

    pub fn cardinality(objective: F, k: usize) -> Result<Self> {
        let n = objective.ground_size();
        if k == 0 || k > n {
            return Err(Error::InvalidParam {
                name: "k",
                value: k as f64,
                want: "in 1..=n",
            });
        }
        Ok(Instance {
            objective,
            kind: ConstraintKind::Cardinality { k },
            costs: vec![1.0; n],
            budget: k as f64,
            active: (0..n).collect(),
            cost_model: None,
        })
    }

    pub fn objective(&self) -> &F {
        &self.objective
    }

    pub fn into_objective(self) -> F {
        self.objective
    }

    pub fn n(&self) -> usize {
        self.objective.ground_size()
    }

    pub fn kind(&self) -> ConstraintKind {
        self.kind
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    /// Elements the algorithms may consider (cost fits inside the budget).
    pub fn active(&self) -> &[ElementId] {
        &self.active
    }

    pub fn cost_model(&self) -> Option<&CostModel> {
        self.cost_model.as_ref()
    }

    pub fn cost_of(&self, members: &[ElementId]) -> f64 {
        members.iter().map(|&x| self.costs[x]).sum()
    }

    pub fn is_feasible(&self, members: &[ElementId]) -> bool {
        match self.kind {
            ConstraintKind::Cardinality { k } => members.len() <= k,
            ConstraintKind::Knapsack => self.cost_of(members) <= self.budget + 1e-9,
        }
    }

    /// Max over min active cost; 1 for cardinality constraints.
    pub fn cost_spread(&self) -> f64 {
        match &self.cost_model {
            Some(cm) => cm.cost_spread(),
            None => 1.0,
        }
    }
}
