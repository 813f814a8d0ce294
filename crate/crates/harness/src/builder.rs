//! Builds runnable instances out of spec descriptions, and runs the sanity
//! probes the runner insists on before charging any experiment queries.

use anyhow::{bail, Context};
use rand::Rng;

use parsub_core::instances::{
    gen_coverage, gen_erdos_renyi, gen_movie, gen_revenue, load_graph_csv, CostKind, CostModel,
    Instance,
};
use parsub_core::objectives::{
    CoverageObjective, CutObjective, ModularObjective, MovieObjective, RevenueObjective,
};
use parsub_core::oracle::{check_monotone, Cursor, ElementId, SetFunction};
use parsub_core::rng::{Purpose, Seeder};

use crate::spec::{ConstraintSpec, CostSpec, ObjectiveSpec};

/// One concrete objective behind a uniform type, so the runner and the brute
/// forcer stay monomorphic over instances.
pub enum Objective {
    Cut(CutObjective),
    Coverage(CoverageObjective),
    Movie(MovieObjective),
    Revenue(RevenueObjective),
    Modular(ModularObjective),
}

macro_rules! each {
    ($on:expr, $f:ident => $body:expr) => {
        match $on {
            Objective::Cut($f) => $body,
            Objective::Coverage($f) => $body,
            Objective::Movie($f) => $body,
            Objective::Revenue($f) => $body,
            Objective::Modular($f) => $body,
        }
    };
}

macro_rules! each_cursor {
    ($on:expr, $c:ident => $body:expr) => {
        match $on {
            ObjCursor::Cut($c) => $body,
            ObjCursor::Coverage($c) => $body,
            ObjCursor::Movie($c) => $body,
            ObjCursor::Revenue($c) => $body,
            ObjCursor::Modular($c) => $body,
        }
    };
}

#[derive(Clone)]
pub enum ObjCursor<'a> {
    Cut(<CutObjective as SetFunction>::Cursor<'a>),
    Coverage(<CoverageObjective as SetFunction>::Cursor<'a>),
    Movie(<MovieObjective as SetFunction>::Cursor<'a>),
    Revenue(<RevenueObjective as SetFunction>::Cursor<'a>),
    Modular(<ModularObjective as SetFunction>::Cursor<'a>),
}

impl Cursor for ObjCursor<'_> {
    fn value(&self) -> f64 {
        each_cursor!(self, c => c.value())
    }

    fn marginal(&self, x: ElementId) -> f64 {
        each_cursor!(self, c => c.marginal(x))
    }

    fn insert(&mut self, x: ElementId) {
        each_cursor!(self, c => c.insert(x))
    }

    fn contains(&self, x: ElementId) -> bool {
        each_cursor!(self, c => c.contains(x))
    }

    fn len(&self) -> usize {
        each_cursor!(self, c => c.len())
    }
}

impl SetFunction for Objective {
    type Cursor<'a> = ObjCursor<'a>;

    fn ground_size(&self) -> usize {
        each!(self, f => f.ground_size())
    }

    fn value(&self, members: &[ElementId]) -> f64 {
        each!(self, f => f.value(members))
    }

    fn cursor(&self) -> ObjCursor<'_> {
        match self {
            Objective::Cut(f) => ObjCursor::Cut(f.cursor()),
            Objective::Coverage(f) => ObjCursor::Coverage(f.cursor()),
            Objective::Movie(f) => ObjCursor::Movie(f.cursor()),
            Objective::Revenue(f) => ObjCursor::Revenue(f.cursor()),
            Objective::Modular(f) => ObjCursor::Modular(f.cursor()),
        }
    }
}

/// Objective plus the incident weights of its graph, when it has one. The
/// incident-proportional cost model needs those weights.
pub struct BuiltObjective {
    pub objective: Objective,
    pub incident: Option<Vec<f64>>,
}

pub fn build_objective(spec: &ObjectiveSpec, seed: u64) -> anyhow::Result<BuiltObjective> {
    let (objective, incident) = match spec {
        ObjectiveSpec::Cut { n, p } => {
            let g = gen_erdos_renyi(*n, *p, seed)?;
            let incident = g.incident_weights();
            (Objective::Cut(CutObjective::new(g)), Some(incident))
        }
        ObjectiveSpec::CutFile { path } => {
            let g = load_graph_csv(path)
                .with_context(|| format!("loading graph {}", path.display()))?;
            let incident = g.incident_weights();
            (Objective::Cut(CutObjective::new(g)), Some(incident))
        }
        ObjectiveSpec::Coverage { n, items, density } => {
            (Objective::Coverage(gen_coverage(*n, *items, *density, seed)?), None)
        }
        ObjectiveSpec::Movie { n, edge_p, genres, alpha, beta, lambda, mu } => {
            let inst = gen_movie(*n, *edge_p, *genres, *alpha, *beta, *lambda, *mu, seed)?;
            (Objective::Movie(MovieObjective::new(inst)), None)
        }
        ObjectiveSpec::Revenue { n, p, lambda, alpha } => {
            let inst = gen_revenue(*n, *p, *lambda, *alpha, seed)?;
            (Objective::Revenue(RevenueObjective::new(inst)), None)
        }
        ObjectiveSpec::Modular { values } => {
            (Objective::Modular(ModularObjective::new(values.clone())), None)
        }
    };
    Ok(BuiltObjective { objective, incident })
}

pub fn build_instance(
    objective: &ObjectiveSpec,
    costs: Option<&CostSpec>,
    constraint: &ConstraintSpec,
    instance_seed: u64,
    cost_seed: u64,
) -> anyhow::Result<Instance<Objective>> {
    let built = build_objective(objective, instance_seed)?;
    let n = built.objective.ground_size();
    match constraint {
        ConstraintSpec::Cardinality { k } => Ok(Instance::cardinality(built.objective, *k)?),
        ConstraintSpec::Knapsack => {
            let spec = costs.context("knapsack constraint needs a cost model")?;
            let model = match spec {
                CostSpec::Uniform { budget_fraction } => {
                    CostModel::assign(CostKind::Uniform01, *budget_fraction, n, None, cost_seed)?
                }
                CostSpec::Unit { budget_fraction } => {
                    CostModel::assign(CostKind::Unit, *budget_fraction, n, None, cost_seed)?
                }
                CostSpec::Incident { budget_fraction } => {
                    let incident = match &built.incident {
                        Some(w) => w.as_slice(),
                        None => bail!("incident costs need a graph-backed objective"),
                    };
                    CostModel::assign(
                        CostKind::IncidentProportional,
                        *budget_fraction,
                        n,
                        Some(incident),
                        cost_seed,
                    )?
                }
                CostSpec::Explicit { costs, budget } => {
                    CostModel::explicit(costs.clone(), *budget)?
                }
            };
            Ok(Instance::knapsack(built.objective, model)?)
        }
    }
}

/// Evaluates the objective on random feasible sets and rejects the instance
/// on the first negative value. The algorithms' guarantees assume f >= 0, so
/// a violation here means the experiment would be garbage.
pub fn probe_nonnegative<F: SetFunction>(
    inst: &Instance<F>,
    trials: u64,
    seed: u64,
) -> anyhow::Result<()> {
    let mut rng = Seeder::new(seed).stream(Purpose::Probe, 0, 0);
    let f = inst.objective();
    for trial in 0..trials {
        let mut set = Vec::new();
        let mut cost = 0.0;
        for &x in inst.active() {
            let c = inst.costs()[x];
            if cost + c <= inst.budget() && rng.random_bool(0.5) {
                set.push(x);
                cost += c;
            }
        }
        let v = f.value(&set);
        if v < 0.0 {
            bail!(
                "objective probe failed on trial {trial}: f({set:?}) = {v}, \
                 feasible cost {cost}; the algorithms assume a nonnegative objective"
            );
        }
    }
    Ok(())
}

/// Randomized monotonicity gate for the monotone maximizer.
pub fn gate_monotone<F: SetFunction>(f: &F, trials: u64, seed: u64) -> anyhow::Result<()> {
    check_monotone(f, trials, seed)
        .context("par_knapsack_monotone needs a monotone objective")?;
    Ok(())
}
