//! The top-level low-adaptivity maximizers: knapsack (non-monotone and
//! monotone) and cardinality. Each gathers candidates from a parallel
//! threshold grid plus a couple of cheap side bets and returns the argmax
//! under deterministic tie-breaking.

mod cardinality;
mod grid;
mod knapsack;
mod monotone;
mod params;
mod result;

pub use cardinality::par_cardinal;
pub use grid::{repeat_threshold_runs, RepeatedRuns};
pub use knapsack::par_knapsack;
pub use monotone::par_knapsack_monotone;
pub use params::{CardinalityParams, Ceilings, KnapsackParams, Mode, MonotoneParams, Variant};
pub use result::{Note, RunResult, TrajectoryPoint, Winner};
pub(crate) use result::TrajectoryBuilder;
