//! JSON experiment descriptions. A spec file mirrors [`ExperimentSpec`]
//! field for field; the sidecar written next to each result CSV is the same
//! structure serialized back out, so a result file always carries the exact
//! configuration that produced it.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context};
use serde::{Deserialize, Serialize};

use parsub_core::maximizers::{
    CardinalityParams, KnapsackParams, Mode, MonotoneParams, Variant,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ModeSpec {
    Theoretical,
    #[default]
    Practical,
}

impl From<ModeSpec> for Mode {
    fn from(m: ModeSpec) -> Mode {
        match m {
            ModeSpec::Theoretical => Mode::Theoretical,
            ModeSpec::Practical => Mode::Practical,
        }
    }
}

impl ModeSpec {
    fn tag(self) -> &'static str {
        match self {
            ModeSpec::Theoretical => "theoretical",
            ModeSpec::Practical => "practical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum VariantSpec {
    #[default]
    Seq,
    Bin,
}

impl From<VariantSpec> for Variant {
    fn from(v: VariantSpec) -> Variant {
        match v {
            VariantSpec::Seq => Variant::Scan,
            VariantSpec::Bin => Variant::Binary,
        }
    }
}

impl VariantSpec {
    fn tag(self) -> &'static str {
        match self {
            VariantSpec::Seq => "seq",
            VariantSpec::Bin => "bin",
        }
    }
}

/// What to maximize, plus the generator knobs to build it from a seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectiveSpec {
    /// Cut objective on G(n, p) with uniform edge weights.
    Cut { n: usize, p: f64 },
    /// Cut objective on a graph loaded from an edge-list file.
    CutFile { path: PathBuf },
    /// Weighted coverage with random covers.
    Coverage { n: usize, items: usize, density: f64 },
    /// Movie recommendation objective on a random similarity graph.
    Movie {
        n: usize,
        edge_p: f64,
        genres: u32,
        alpha: f64,
        beta: f64,
        lambda: f64,
        mu: f64,
    },
    /// Revenue maximization on a random influence graph.
    Revenue { n: usize, p: f64, lambda: f64, alpha: f64 },
    /// Fixed modular objective, mostly for goldens and brute-force checks.
    Modular { values: Vec<f64> },
}

impl ObjectiveSpec {
    /// Declared ground-set size; file-backed objectives only know it after
    /// loading.
    pub fn size(&self) -> Option<usize> {
        match self {
            ObjectiveSpec::Cut { n, .. }
            | ObjectiveSpec::Coverage { n, .. }
            | ObjectiveSpec::Movie { n, .. }
            | ObjectiveSpec::Revenue { n, .. } => Some(*n),
            ObjectiveSpec::Modular { values } => Some(values.len()),
            ObjectiveSpec::CutFile { .. } => None,
        }
    }

    /// The same generator at a different ground-set size, for size sweeps.
    pub fn resized(&self, n: usize) -> anyhow::Result<ObjectiveSpec> {
        let mut out = self.clone();
        match &mut out {
            ObjectiveSpec::Cut { n: m, .. }
            | ObjectiveSpec::Coverage { n: m, .. }
            | ObjectiveSpec::Movie { n: m, .. }
            | ObjectiveSpec::Revenue { n: m, .. } => *m = n,
            ObjectiveSpec::CutFile { .. } | ObjectiveSpec::Modular { .. } => {
                bail!("objective has a fixed ground set and cannot be size-swept")
            }
        }
        Ok(out)
    }
}

/// Cost model for knapsack instances.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CostSpec {
    Uniform { budget_fraction: f64 },
    Incident { budget_fraction: f64 },
    Unit { budget_fraction: f64 },
    Explicit { costs: Vec<f64>, budget: f64 },
}

impl CostSpec {
    pub fn budget_fraction(&self) -> Option<f64> {
        match self {
            CostSpec::Uniform { budget_fraction }
            | CostSpec::Incident { budget_fraction }
            | CostSpec::Unit { budget_fraction } => Some(*budget_fraction),
            CostSpec::Explicit { .. } => None,
        }
    }

    /// The same draw with a different budget fraction, for budget sweeps.
    pub fn with_fraction(&self, fraction: f64) -> anyhow::Result<CostSpec> {
        let mut out = self.clone();
        match &mut out {
            CostSpec::Uniform { budget_fraction }
            | CostSpec::Incident { budget_fraction }
            | CostSpec::Unit { budget_fraction } => *budget_fraction = fraction,
            CostSpec::Explicit { .. } => bail!("explicit costs carry an absolute budget"),
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstraintSpec {
    Knapsack,
    Cardinality { k: usize },
}

/// One algorithm entry of the grid. `mode` and `variant` default to the
/// practical sequential configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgorithmSpec {
    Greedy,
    SampleGreedy {
        p: f64,
    },
    ParKnapsack {
        eps: f64,
        #[serde(default)]
        mode: ModeSpec,
        #[serde(default)]
        variant: VariantSpec,
    },
    ParKnapsackMonotone {
        eps: f64,
        #[serde(default)]
        mode: ModeSpec,
        #[serde(default)]
        variant: VariantSpec,
    },
    ParCardinal {
        eps: f64,
        #[serde(default)]
        mode: ModeSpec,
        #[serde(default)]
        variant: VariantSpec,
    },
}

impl AlgorithmSpec {
    /// Stable row key. Contains no commas, so it can sit in a CSV unquoted.
    pub fn label(&self) -> String {
        match self {
            AlgorithmSpec::Greedy => "greedy".into(),
            AlgorithmSpec::SampleGreedy { p } => format!("sample_greedy(p={p})"),
            AlgorithmSpec::ParKnapsack { eps, mode, variant } => {
                format!("par_knapsack(eps={eps} {} {})", mode.tag(), variant.tag())
            }
            AlgorithmSpec::ParKnapsackMonotone { eps, mode, variant } => {
                format!("par_knapsack_monotone(eps={eps} {} {})", mode.tag(), variant.tag())
            }
            AlgorithmSpec::ParCardinal { eps, mode, variant } => {
                format!("par_cardinal(eps={eps} {} {})", mode.tag(), variant.tag())
            }
        }
    }

    /// Whether the runner must verify monotonicity before running this.
    pub fn needs_monotone(&self) -> bool {
        matches!(self, AlgorithmSpec::ParKnapsackMonotone { .. })
    }

    pub fn set_mode(&mut self, m: ModeSpec) {
        match self {
            AlgorithmSpec::ParKnapsack { mode, .. }
            | AlgorithmSpec::ParKnapsackMonotone { mode, .. }
            | AlgorithmSpec::ParCardinal { mode, .. } => *mode = m,
            AlgorithmSpec::Greedy | AlgorithmSpec::SampleGreedy { .. } => {}
        }
    }

    pub fn set_variant(&mut self, v: VariantSpec) {
        match self {
            AlgorithmSpec::ParKnapsack { variant, .. }
            | AlgorithmSpec::ParKnapsackMonotone { variant, .. }
            | AlgorithmSpec::ParCardinal { variant, .. } => *variant = v,
            AlgorithmSpec::Greedy | AlgorithmSpec::SampleGreedy { .. } => {}
        }
    }

    fn validate(&self, constraint: &ConstraintSpec) -> anyhow::Result<()> {
        let knapsack = matches!(constraint, ConstraintSpec::Knapsack);
        match self {
            AlgorithmSpec::Greedy => Ok(()),
            AlgorithmSpec::SampleGreedy { p } => {
                ensure!(*p > 0.0 && *p <= 1.0, "sample_greedy p must be in (0, 1], got {p}");
                Ok(())
            }
            AlgorithmSpec::ParKnapsack { eps, mode, .. } => {
                ensure!(knapsack, "par_knapsack needs a knapsack constraint");
                knapsack_params(*eps, *mode).validate()?;
                Ok(())
            }
            AlgorithmSpec::ParKnapsackMonotone { eps, mode, .. } => {
                ensure!(knapsack, "par_knapsack_monotone needs a knapsack constraint");
                monotone_params(*eps, *mode).validate()?;
                Ok(())
            }
            AlgorithmSpec::ParCardinal { eps, mode, .. } => {
                ensure!(!knapsack, "par_cardinal needs a cardinality constraint");
                cardinality_params(*eps, *mode).validate()?;
                Ok(())
            }
        }
    }
}

pub fn knapsack_params(eps: f64, mode: ModeSpec) -> KnapsackParams {
    match mode {
        ModeSpec::Theoretical => KnapsackParams::theoretical(eps),
        ModeSpec::Practical => KnapsackParams::practical(eps),
    }
}

pub fn monotone_params(eps: f64, mode: ModeSpec) -> MonotoneParams {
    match mode {
        ModeSpec::Theoretical => MonotoneParams::theoretical(eps),
        ModeSpec::Practical => MonotoneParams::practical(eps),
    }
}

pub fn cardinality_params(eps: f64, mode: ModeSpec) -> CardinalityParams {
    match mode {
        ModeSpec::Theoretical => CardinalityParams::theoretical(eps),
        ModeSpec::Practical => CardinalityParams::practical(eps),
    }
}

/// What varies across the x axis of a figure.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SweepSpec {
    /// Budget fractions on a fixed instance.
    Budget { fractions: Vec<f64> },
    /// Ground-set sizes, regenerating the instance per point.
    Size { sizes: Vec<usize> },
}

/// One x-axis position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepPoint {
    Fraction(f64),
    Size(usize),
}

impl SweepPoint {
    /// CSV cell for the sweep column.
    pub fn label(&self) -> String {
        match self {
            SweepPoint::Fraction(v) => crate::runner::sig9(*v),
            SweepPoint::Size(n) => n.to_string(),
        }
    }
}

impl SweepSpec {
    pub fn len(&self) -> usize {
        match self {
            SweepSpec::Budget { fractions } => fractions.len(),
            SweepSpec::Size { sizes } => sizes.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Vec<SweepPoint> {
        match self {
            SweepSpec::Budget { fractions } => {
                fractions.iter().map(|&v| SweepPoint::Fraction(v)).collect()
            }
            SweepSpec::Size { sizes } => sizes.iter().map(|&n| SweepPoint::Size(n)).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub id: String,
    pub objective: ObjectiveSpec,
    /// Required for knapsack constraints, forbidden for cardinality ones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub costs: Option<CostSpec>,
    pub constraint: ConstraintSpec,
    pub algorithms: Vec<AlgorithmSpec>,
    pub seeds: Vec<u64>,
    pub sweep: SweepSpec,
    pub output: PathBuf,
}

impl ExperimentSpec {
    pub fn load(path: impl AsRef<Path>) -> anyhow::Result<ExperimentSpec> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading spec {}", path.display()))?;
        let spec: ExperimentSpec = serde_json::from_str(&text)
            .with_context(|| format!("parsing spec {}", path.display()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        ensure!(!self.id.is_empty(), "experiment id is empty");
        ensure!(
            !self.id.contains(',') && !self.id.contains('\n'),
            "experiment id must not contain commas or newlines"
        );
        ensure!(!self.seeds.is_empty(), "seeds list is empty");
        let mut seeds = self.seeds.clone();
        seeds.sort_unstable();
        seeds.dedup();
        ensure!(seeds.len() == self.seeds.len(), "duplicate seeds");
        ensure!(!self.algorithms.is_empty(), "algorithm list is empty");
        let mut labels: Vec<String> = self.algorithms.iter().map(|a| a.label()).collect();
        labels.sort();
        labels.dedup();
        ensure!(labels.len() == self.algorithms.len(), "duplicate algorithm entries");
        ensure!(self.output.as_os_str().len() > 0, "output path is empty");

        match (&self.constraint, &self.costs) {
            (ConstraintSpec::Knapsack, None) => bail!("knapsack constraint needs a cost model"),
            (ConstraintSpec::Cardinality { .. }, Some(_)) => {
                bail!("cardinality constraint carries its own unit costs; drop the cost model")
            }
            (ConstraintSpec::Cardinality { k }, None) => {
                ensure!(*k >= 1, "cardinality bound must be at least 1");
            }
            (ConstraintSpec::Knapsack, Some(cs)) => {
                if let Some(frac) = cs.budget_fraction() {
                    ensure!(frac > 0.0 && frac <= 1.0, "budget fraction must be in (0, 1]");
                }
                if let (CostSpec::Explicit { costs, .. }, Some(n)) = (cs, self.objective.size()) {
                    ensure!(
                        costs.len() == n,
                        "{} explicit costs for a ground set of {n} elements",
                        costs.len()
                    );
                }
            }
        }

        for alg in &self.algorithms {
            alg.validate(&self.constraint)?;
        }

        ensure!(!self.sweep.is_empty(), "sweep has no points");
        match &self.sweep {
            SweepSpec::Budget { fractions } => {
                ensure!(
                    matches!(self.constraint, ConstraintSpec::Knapsack),
                    "budget sweeps need a knapsack constraint"
                );
                ensure!(
                    !matches!(self.costs, Some(CostSpec::Explicit { .. })),
                    "budget sweeps need fractional budgets, not explicit ones"
                );
                for w in fractions.windows(2) {
                    ensure!(w[0] < w[1], "sweep values must be strictly ascending");
                }
                for &v in fractions {
                    ensure!(v > 0.0 && v <= 1.0, "budget fraction {v} outside (0, 1]");
                }
            }
            SweepSpec::Size { sizes } => {
                self.objective.resized(sizes[0]).context("size sweep")?;
                ensure!(
                    !matches!(self.costs, Some(CostSpec::Explicit { .. })),
                    "size sweeps regenerate instances; explicit costs have a fixed length"
                );
                for w in sizes.windows(2) {
                    ensure!(w[0] < w[1], "sweep values must be strictly ascending");
                }
                if let ConstraintSpec::Cardinality { k } = self.constraint {
                    ensure!(k <= sizes[0], "cardinality bound {k} exceeds smallest size");
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ExperimentSpec {
        ExperimentSpec {
            id: "t".into(),
            objective: ObjectiveSpec::Cut { n: 12, p: 0.3 },
            costs: Some(CostSpec::Uniform { budget_fraction: 0.5 }),
            constraint: ConstraintSpec::Knapsack,
            algorithms: vec![
                AlgorithmSpec::Greedy,
                AlgorithmSpec::ParKnapsack {
                    eps: 0.125,
                    mode: ModeSpec::Practical,
                    variant: VariantSpec::Seq,
                },
            ],
            seeds: vec![1, 2],
            sweep: SweepSpec::Budget { fractions: vec![0.25, 0.5] },
            output: PathBuf::from("out.csv"),
        }
    }

    #[test]
    fn json_round_trip() {
        let spec = base();
        let text = serde_json::to_string_pretty(&spec).unwrap();
        let back: ExperimentSpec = serde_json::from_str(&text).unwrap();
        back.validate().unwrap();
        assert_eq!(back.id, spec.id);
        assert_eq!(back.algorithms, spec.algorithms);
    }

    #[test]
    fn defaults_fill_mode_and_variant() {
        let text = r#"{"name": "par_knapsack", "eps": 0.125}"#;
        let alg: AlgorithmSpec = serde_json::from_str(text).unwrap();
        assert_eq!(
            alg,
            AlgorithmSpec::ParKnapsack {
                eps: 0.125,
                mode: ModeSpec::Practical,
                variant: VariantSpec::Seq,
            }
        );
        assert_eq!(alg.label(), "par_knapsack(eps=0.125 practical seq)");
    }

    #[test]
    fn bad_specs_are_rejected() {
        let mut s = base();
        s.seeds.clear();
        assert!(s.validate().is_err());

        let mut s = base();
        s.sweep = SweepSpec::Budget { fractions: vec![0.5, 0.25] };
        assert!(s.validate().is_err());

        let mut s = base();
        s.costs = None;
        assert!(s.validate().is_err());

        let mut s = base();
        s.constraint = ConstraintSpec::Cardinality { k: 4 };
        assert!(s.validate().is_err(), "cardinality with leftover cost model");

        let mut s = base();
        s.algorithms.push(AlgorithmSpec::ParCardinal {
            eps: 0.2,
            mode: ModeSpec::Practical,
            variant: VariantSpec::Seq,
        });
        assert!(s.validate().is_err(), "cardinal algorithm under knapsack");

        let mut s = base();
        s.sweep = SweepSpec::Size { sizes: vec![16, 32] };
        s.objective = ObjectiveSpec::Modular { values: vec![1.0, 2.0] };
        assert!(s.validate().is_err(), "size sweep on fixed objective");

        let mut s = base();
        s.algorithms = vec![AlgorithmSpec::SampleGreedy { p: 1.5 }];
        assert!(s.validate().is_err());
    }

    #[test]
    fn cardinality_spec_passes() {
        let mut s = base();
        s.costs = None;
        s.constraint = ConstraintSpec::Cardinality { k: 4 };
        s.algorithms = vec![
            AlgorithmSpec::Greedy,
            AlgorithmSpec::ParCardinal {
                eps: 0.2,
                mode: ModeSpec::Practical,
                variant: VariantSpec::Seq,
            },
        ];
        s.sweep = SweepSpec::Size { sizes: vec![12, 16] };
        s.validate().unwrap();
    }
}
