//! Submodular maximization with few adaptive rounds.
//!
//! The crate is organized around a query-accounting oracle: every value query an
//! algorithm issues is charged to a [`oracle::QueryLedger`], and queries that could
//! have been issued together as one independent batch cost a single adaptive round.
//! On top of that sit the sampling kernels (`kernels`), the knapsack / cardinality
//! maximizers built from them (`maximizers`), and sequential greedy baselines
//! (`baselines`) whose ledgers make the adaptivity gap measurable.
//!
//! Ground sets are dense `0..n` element ids. Objectives implement
//! [`oracle::SetFunction`], which exposes both from-scratch evaluation and an
//! incremental [`oracle::Cursor`] so marginal-heavy scans stay cheap without
//! changing what gets charged to the ledger.

pub mod baselines;
pub mod error;
pub mod instances;
pub mod kernels;
pub mod maximizers;
pub mod objectives;
pub mod oracle;
pub mod rng;

pub use error::{Error, Result};
pub use oracle::{Cursor, ElementId, GroundSet, QueryLedger, SetFunction};
