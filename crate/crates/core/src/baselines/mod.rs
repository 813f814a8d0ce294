//! Sequential baselines the parallel algorithms are measured against.
//!
//! All of them run on the same metered oracle, with honest adaptivity
//! accounting: a batch of independent queries is one round, and every
//! decision that depends on a previous answer opens a new one. Greedy's
//! lazy evaluations therefore each cost a round of their own, which is
//! what makes the round-count comparison against the parallel algorithms
//! meaningful rather than an artifact of bookkeeping.

mod greedy;
mod lazy;
mod sample;

pub use greedy::{greedy, greedy_naive};
pub use lazy::LazyHeap;
pub use sample::sample_greedy;
