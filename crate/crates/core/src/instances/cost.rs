use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::oracle::ElementId;
use crate::rng::mix;

/// How per-element knapsack costs are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostKind {
    /// Independent uniform draws from (0, 1].
    Uniform01,
    /// Proportional to each element's incident edge weight, rescaled so the
    /// priced elements average cost 1. Elements without incident weight
    /// cannot be priced and leave the effective ground set.
    IncidentProportional,
    /// Every element costs 1.
    Unit,
    /// Caller-supplied costs and an absolute budget; the only kind whose
    /// budget may exceed the total cost.
    Explicit,
}

/// Costs plus budget. The budget is a fraction of the total cost; any element
/// priced above the budget is excluded from `active`, which keeps the
/// standing assumption max c(x) ≤ B true for everything the algorithms see.
#[derive(Debug, Clone)]
pub struct CostModel {
    kind: CostKind,
    budget_fraction: f64,
    costs: Vec<f64>,
    budget: f64,
    active: Vec<ElementId>,
}

impl CostModel {
    /// Draw costs for `n` elements. `incident` supplies per-element incident
    /// weights and is required for (and only for) the proportional kind.
    pub fn assign(
        kind: CostKind,
        budget_fraction: f64,
        n: usize,
        incident: Option<&[f64]>,
        seed: u64,
    ) -> Result<Self> {
        if !(budget_fraction > 0.0 && budget_fraction <= 1.0) {
            return Err(Error::InvalidParam {
                name: "budget_fraction",
                value: budget_fraction,
                want: "in (0, 1]",
            });
        }
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(mix(seed));
        let costs: Vec<f64> = match kind {
            CostKind::Explicit => {
                return Err(Error::contract(
                    "assign_costs",
                    "explicit costs are built with CostModel::explicit",
                ))
            }
            CostKind::Unit => vec![1.0; n],
            CostKind::Uniform01 => (0..n).map(|_| 1.0 - rng.random::<f64>()).collect(),
            CostKind::IncidentProportional => {
                let incident = incident.ok_or_else(|| {
                    Error::contract("assign_costs", "proportional costs need incident weights")
                })?;
                if incident.len() != n {
                    return Err(Error::contract(
                        "assign_costs",
                        format!("{} incident weights for {n} elements", incident.len()),
                    ));
                }
                let priced = incident.iter().filter(|&&w| w > 0.0).count();
                if priced == 0 {
                    return Err(Error::EmptyInstance {
                        what: "no element has positive incident weight".into(),
                    });
                }
                let total: f64 = incident.iter().sum();
                let scale = priced as f64 / total;
                incident.iter().map(|&w| w * scale).collect()
            }
        };
        let total: f64 = costs.iter().sum();
        let budget = budget_fraction * total;
        let active: Vec<ElementId> = (0..n)
            .filter(|&x| costs[x] > 0.0 && costs[x] <= budget)
            .collect();
        if active.is_empty() {
            return Err(Error::EmptyInstance {
                what: format!("budget {budget} admits no element"),
            });
        }
        Ok(CostModel {
            kind,
            budget_fraction,
            costs,
            budget,
            active,
        })
    }

    /// Caller-supplied costs with an absolute budget. Unlike `assign`, the
    /// budget may exceed the total cost, which is how degenerate regimes
    /// (everything tiny, budget covering the whole ground set) are built.
    pub fn explicit(costs: Vec<f64>, budget: f64) -> Result<Self> {
        if costs.is_empty() {
            return Err(Error::EmptyGroundSet);
        }
        if !(budget > 0.0 && budget.is_finite()) {
            return Err(Error::InvalidParam {
                name: "budget",
                value: budget,
                want: "positive and finite",
            });
        }
        for (x, &c) in costs.iter().enumerate() {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::contract(
                    "explicit_costs",
                    format!("cost of element {x} is {c}, want positive finite"),
                ));
            }
        }
        let total: f64 = costs.iter().sum();
        let active: Vec<ElementId> = (0..costs.len()).filter(|&x| costs[x] <= budget).collect();
        if active.is_empty() {
            return Err(Error::EmptyInstance {
                what: format!("budget {budget} admits no element"),
            });
        }
        Ok(CostModel {
            kind: CostKind::Explicit,
            budget_fraction: budget / total,
            costs,
            budget,
            active,
        })
    }

    pub fn kind(&self) -> CostKind {
        self.kind
    }

    pub fn budget_fraction(&self) -> f64 {
        self.budget_fraction
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn cost(&self, x: ElementId) -> f64 {
        self.costs[x]
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    /// Elements that survived normalization: positive cost, cost ≤ budget.
    pub fn active(&self) -> &[ElementId] {
        &self.active
    }

    /// Ratio of the largest to smallest active cost (the cost spread that
    /// drives round bounds).
    pub fn cost_spread(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for &x in &self.active {
            lo = lo.min(self.costs[x]);
            hi = hi.max(self.costs[x]);
        }
        hi / lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_costs_and_half_budget() {
        let cm = CostModel::assign(CostKind::Unit, 0.5, 10, None, 1).unwrap();
        assert_eq!(cm.budget(), 5.0);
        assert_eq!(cm.active().len(), 10);
        assert_eq!(cm.cost_spread(), 1.0);
    }

    #[test]
    fn uniform_budget_is_fraction_of_total() {
        let cm = CostModel::assign(CostKind::Uniform01, 0.15, 100, None, 2).unwrap();
        let total: f64 = cm.costs().iter().sum();
        assert!((cm.budget() - 0.15 * total).abs() < 1e-12);
        assert!(cm.costs().iter().all(|&c| c > 0.0 && c <= 1.0));
        for &x in cm.active() {
            assert!(cm.cost(x) <= cm.budget());
        }
    }

    #[test]
    fn proportional_on_triangle_is_unit() {
        let incident = [2.0, 2.0, 2.0];
        let cm =
            CostModel::assign(CostKind::IncidentProportional, 0.5, 3, Some(&incident), 3).unwrap();
        assert_eq!(cm.costs(), &[1.0, 1.0, 1.0]);
        assert!((cm.budget() - 1.5).abs() < 1e-12);
        assert_eq!(cm.active().len(), 3);
        // A budget below every cost leaves nothing active.
        let err = CostModel::assign(CostKind::IncidentProportional, 0.15, 3, Some(&incident), 3)
            .unwrap_err();
        assert!(matches!(err, Error::EmptyInstance { .. }));
    }

    #[test]
    fn oversized_elements_leave_the_ground_set() {
        let incident = [1.0, 1.0, 1.0, 97.0];
        let cm =
            CostModel::assign(CostKind::IncidentProportional, 0.3, 4, Some(&incident), 4).unwrap();
        // Total cost 4, budget 1.2; the heavy element costs 3.88 and is out.
        assert_eq!(cm.active(), &[0, 1, 2]);
        for &x in cm.active() {
            assert!(cm.cost(x) <= cm.budget());
        }
    }

    #[test]
    fn zero_incident_elements_are_unpriced() {
        let incident = [0.0, 3.0, 1.0];
        let cm =
            CostModel::assign(CostKind::IncidentProportional, 0.9, 3, Some(&incident), 5).unwrap();
        assert!(!cm.active().contains(&0));
        // Priced elements average 1.
        assert!((cm.cost(1) + cm.cost(2) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn impossible_budgets_error() {
        // One element, budget a fraction of its own cost: nothing fits.
        let err = CostModel::assign(CostKind::Unit, 0.5, 1, None, 6).unwrap_err();
        assert!(matches!(err, Error::EmptyInstance { .. }));
        assert!(CostModel::assign(CostKind::Unit, 0.0, 5, None, 7).is_err());
        assert!(CostModel::assign(CostKind::Unit, 1.5, 5, None, 8).is_err());
    }

    #[test]
    fn same_seed_same_costs() {
        let a = CostModel::assign(CostKind::Uniform01, 0.1, 50, None, 42).unwrap();
        let b = CostModel::assign(CostKind::Uniform01, 0.1, 50, None, 42).unwrap();
        assert_eq!(a.costs(), b.costs());
        assert_eq!(a.active(), b.active());
    }

    #[test]
    fn explicit_costs_allow_oversized_budgets() {
        let cm = CostModel::explicit(vec![0.05; 4], 1.0).unwrap();
        assert_eq!(cm.kind(), CostKind::Explicit);
        assert_eq!(cm.budget(), 1.0);
        assert_eq!(cm.active().len(), 4);
        assert!(cm.budget_fraction() > 1.0);

        // Oversized elements still drop; degenerate inputs still error.
        let cm = CostModel::explicit(vec![0.5, 3.0], 1.0).unwrap();
        assert_eq!(cm.active(), &[0]);
        assert!(CostModel::explicit(vec![], 1.0).is_err());
        assert!(CostModel::explicit(vec![1.0], 0.0).is_err());
        assert!(CostModel::explicit(vec![-1.0], 1.0).is_err());
        assert!(CostModel::explicit(vec![2.0], 1.0).is_err());
        assert!(CostModel::assign(CostKind::Explicit, 0.5, 3, None, 1).is_err());
    }
}
