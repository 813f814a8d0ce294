//! Low-adaptivity building blocks for the constrained maximizers.
//!
//! The central routine grows a solution by drawing one random feasible
//! sequence per adaptive round and cutting it at the shortest prefix where a
//! stopping rule holds. Two interchangeable kernels implement it: a scan
//! that prices every prefix of the sequence in one batch, and a binary
//! search over monotone rules that probes O(log d) prefixes in as many
//! rounds but prices far fewer (prefix, element) pairs overall.
//!
//! Reference implementations re-run both kernels through plain oracle
//! batches so tests can certify that the fast paths hide no queries.

mod binary;
mod prefix;
mod reference;
mod sample;
mod scan;
mod unconstrained;

pub use binary::threshold_binary;
pub use prefix::{
    binary_loss, binary_search_cutoff, check_bin_monotonicity, cost_triggered, find_cutoff,
    find_cutoff_binary_rules, scan_loss, value_triggered, BinarySearchOutcome, Cutoff, PrefixRow,
    PrefixTable, Trigger,
};
pub use reference::{
    materialize_table, threshold_binary_reference, threshold_sequence_reference, RuleSet,
};
pub use sample::{sample_sequence, SampledSequence};
pub use scan::{threshold_sequence, IterationRecord, ThreshOutcome, ThreshParams, ValueRule};
pub use unconstrained::{unconstrained_max, UnconstrainedOutcome};
