use thiserror::Error;

/// Crate-wide error type. Contract violations are reported with the operation
/// that rejected its inputs; parse errors carry the offending file and line.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ground set needs at least one element")]
    EmptyGroundSet,

    #[error("element id {id} out of range for ground set of size {n}")]
    ElementOutOfRange { id: usize, n: usize },

    #[error("ledger {id} is closed; it was already joined into its parent")]
    ClosedLedger { id: u64 },

    #[error("fork needs at least one branch")]
    EmptyFork,

    #[error("join needs at least one child")]
    EmptyJoin,

    #[error("ledger {child} is not a child of ledger {parent}")]
    ForeignChild { child: u64, parent: u64 },

    #[error("contract violation in {op}: {what}")]
    Contract { op: &'static str, what: String },

    #[error("invalid parameter {name} = {value}; expected {want}")]
    InvalidParam {
        name: &'static str,
        value: f64,
        want: &'static str,
    },

    #[error("objective returned a non-finite value at {context}")]
    NonFinite { context: String },

    #[error("objective is not monotone: f({element} | S) = {marginal} for a set of size {base_len}")]
    NotMonotone {
        element: usize,
        base_len: usize,
        marginal: f64,
    },

    #[error("empty instance: {what}")]
    EmptyInstance { what: String },

    #[error("{path}:{line}: {what}")]
    Parse {
        path: String,
        line: usize,
        what: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn contract(op: &'static str, what: impl Into<String>) -> Self {
        Error::Contract {
            op,
            what: what.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
