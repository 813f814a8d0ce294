//! Value oracle with query and adaptivity accounting.
//!
//! A [`QueryLedger`] counts every value query an algorithm issues and the number
//! of adaptive rounds they form: queries issued together as one batch (none
//! depending on another's answer) cost one round. `fork`/`join` let independent
//! branches run on child ledgers; joining charges the parent the *maximum* child
//! round count and the *sum* of child queries, which is exactly the adaptive
//! complexity of running the branches in parallel.

mod checks;
mod eval;
mod function;
mod ledger;

pub use checks::{
    check_monotone, check_sampling_lemma, check_submodular, check_submodular_exhaustive,
    SamplingLemmaReport, SubmodularityReport,
};
pub use eval::Oracle;
pub use function::{Cursor, ElementId, FnSetFunction, GenericCursor, SetFunction};
pub use ledger::{GroundSet, LedgerSnapshot, QueryLedger, RoundScope};
