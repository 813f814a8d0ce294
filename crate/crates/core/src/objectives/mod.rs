//! Objective functions: the three benchmark objectives (weighted cut, movie
//! recommendation, network revenue) plus modular and coverage objectives for
//! tests. Each ships a scratch evaluator and an incremental cursor; the two
//! must agree, and the cursor exists purely so that prefix scans stay cheap.

mod coverage;
mod cut;
mod graph;
mod modular;
mod movie;
mod revenue;

pub use coverage::CoverageObjective;
pub use cut::{cut_value, CutObjective};
pub use graph::{Adjacency, WeightedGraph};
pub use modular::{modular_value, ModularObjective};
pub use movie::{movie_similarity, movie_value, MovieInstance, MovieObjective};
pub use revenue::{revenue_value, RevenueInstance, RevenueObjective};
