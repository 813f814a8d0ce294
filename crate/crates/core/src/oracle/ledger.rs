use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

static NEXT_LEDGER_ID: AtomicU64 = AtomicU64::new(1);

/// Dense ground set `0..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        Ok(GroundSet { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, id: usize) -> bool {
        id < self.n
    }

    pub fn check(&self, id: usize) -> Result<()> {
        if id < self.n {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { id, n: self.n })
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        0..self.n
    }
}

/// Point-in-time ledger totals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LedgerSnapshot {
    pub queries: u64,
    pub rounds: u64,
}

impl LedgerSnapshot {
    /// Totals accrued since an earlier snapshot of the same ledger.
    pub fn since(&self, earlier: LedgerSnapshot) -> LedgerSnapshot {
        LedgerSnapshot {
            queries: self.queries - earlier.queries,
            rounds: self.rounds - earlier.rounds,
        }
    }
}

/// Counts value queries and adaptive rounds.
///
/// A live ledger accepts query batches via [`QueryLedger::begin_round`] and can
/// fork children for independent parallel branches. Joining the children adds
/// `max(child rounds)` to the parent's rounds and the sum of child queries to
/// its queries, then closes the children. A batch of size zero costs nothing.
#[derive(Debug)]
pub struct QueryLedger {
    id: u64,
    parent: Option<u64>,
    queries: u64,
    rounds: u64,
    live: bool,
}

impl QueryLedger {
    pub fn root() -> Self {
        QueryLedger {
            id: NEXT_LEDGER_ID.fetch_add(1, Ordering::Relaxed),
            parent: None,
            queries: 0,
            rounds: 0,
            live: true,
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn is_live(&self) -> bool {
        self.live
    }

    pub fn snapshot(&self) -> LedgerSnapshot {
        LedgerSnapshot {
            queries: self.queries,
            rounds: self.rounds,
        }
    }

    fn ensure_live(&self) -> Result<()> {
        if self.live {
            Ok(())
        } else {
            Err(Error::ClosedLedger { id: self.id })
        }
    }

    /// Open one adaptive round. The round is only counted once at least one
    /// query is charged to it, so an unused scope is free.
    pub fn begin_round(&mut self) -> Result<RoundScope<'_>> {
        self.ensure_live()?;
        Ok(RoundScope {
            ledger: self,
            opened: false,
        })
    }

    /// Charge a whole batch in one round. Size zero charges nothing.
    pub fn charge_batch(&mut self, queries: u64) -> Result<()> {
        let mut round = self.begin_round()?;
        round.charge(queries);
        Ok(())
    }

    /// Spawn `branches` child ledgers that may be driven independently (also
    /// from other threads). The parent stays live.
    pub fn fork(&mut self, branches: usize) -> Result<Vec<QueryLedger>> {
        self.ensure_live()?;
        if branches == 0 {
            return Err(Error::EmptyFork);
        }
        Ok((0..branches)
            .map(|_| QueryLedger {
                id: NEXT_LEDGER_ID.fetch_add(1, Ordering::Relaxed),
                parent: Some(self.id),
                queries: 0,
                rounds: 0,
                live: true,
            })
            .collect())
    }

    /// Merge children back: rounds advance by the deepest child, queries by the
    /// sum. Children are closed and reject further use.
    pub fn join(&mut self, children: &mut [QueryLedger]) -> Result<()> {
        self.ensure_live()?;
        if children.is_empty() {
            return Err(Error::EmptyJoin);
        }
        for child in children.iter() {
            if child.parent != Some(self.id) {
                return Err(Error::ForeignChild {
                    child: child.id,
                    parent: self.id,
                });
            }
            if !child.live {
                return Err(Error::ClosedLedger { id: child.id });
            }
        }
        let mut max_rounds = 0;
        let mut total_queries = 0u64;
        for child in children.iter_mut() {
            max_rounds = max_rounds.max(child.rounds);
            total_queries += child.queries;
            child.live = false;
        }
        self.rounds += max_rounds;
        self.queries += total_queries;
        debug_assert!(self.queries == 0 || self.rounds <= self.queries);
        Ok(())
    }
}

/// One adaptive round in progress; see [`QueryLedger::begin_round`].
pub struct RoundScope<'a> {
    ledger: &'a mut QueryLedger,
    opened: bool,
}

impl RoundScope<'_> {
    /// Add queries to this round. The first positive charge opens the round.
    pub fn charge(&mut self, queries: u64) {
        if queries == 0 {
            return;
        }
        if !self.opened {
            self.ledger.rounds += 1;
            self.opened = true;
        }
        self.ledger.queries += queries;
        debug_assert!(self.ledger.rounds <= self.ledger.queries);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_set_rejects_empty() {
        assert!(matches!(GroundSet::new(0), Err(Error::EmptyGroundSet)));
        let g = GroundSet::new(3).unwrap();
        assert!(g.contains(2));
        assert!(!g.contains(3));
        assert!(g.check(3).is_err());
    }

    #[test]
    fn sequential_batches_accumulate() {
        let mut ledger = QueryLedger::root();
        ledger.charge_batch(5).unwrap();
        ledger.charge_batch(7).unwrap();
        assert_eq!(ledger.queries(), 12);
        assert_eq!(ledger.rounds(), 2);
    }

    #[test]
    fn empty_batch_is_free() {
        let mut ledger = QueryLedger::root();
        ledger.charge_batch(0).unwrap();
        let scope = ledger.begin_round().unwrap();
        drop(scope);
        assert_eq!(ledger.queries(), 0);
        assert_eq!(ledger.rounds(), 0);
    }

    #[test]
    fn join_takes_max_rounds_sum_queries() {
        let mut parent = QueryLedger::root();
        let mut kids = parent.fork(3).unwrap();
        kids[0].charge_batch(4).unwrap();
        kids[1].charge_batch(2).unwrap();
        kids[1].charge_batch(2).unwrap();
        kids[2].charge_batch(2).unwrap();
        parent.join(&mut kids).unwrap();
        assert_eq!(parent.rounds(), 2);
        assert_eq!(parent.queries(), 10);
    }

    #[test]
    fn idle_child_costs_nothing() {
        let mut parent = QueryLedger::root();
        parent.charge_batch(1).unwrap();
        let mut kids = parent.fork(1).unwrap();
        parent.join(&mut kids).unwrap();
        assert_eq!(parent.rounds(), 1);
        assert_eq!(parent.queries(), 1);
    }

    #[test]
    fn join_rejects_empty_foreign_and_double() {
        let mut parent = QueryLedger::root();
        let mut other = QueryLedger::root();
        assert!(matches!(parent.join(&mut []), Err(Error::EmptyJoin)));

        let mut stranger = other.fork(1).unwrap();
        assert!(matches!(
            parent.join(&mut stranger),
            Err(Error::ForeignChild { .. })
        ));

        let mut kids = parent.fork(2).unwrap();
        parent.join(&mut kids).unwrap();
        assert!(matches!(
            parent.join(&mut kids),
            Err(Error::ClosedLedger { .. })
        ));
        assert!(kids[0].charge_batch(1).is_err());
    }

    #[test]
    fn nested_fork_contributes_through_parent() {
        let mut root = QueryLedger::root();
        let mut mid = root.fork(1).unwrap();
        mid[0].charge_batch(1).unwrap();
        let mut leaves = mid[0].fork(2).unwrap();
        leaves[0].charge_batch(3).unwrap();
        leaves[0].charge_batch(3).unwrap();
        leaves[1].charge_batch(1).unwrap();
        mid[0].join(&mut leaves).unwrap();
        root.join(&mut mid).unwrap();
        // mid: 1 own round + max(2, 1) joined = 3 rounds, 1 + 7 queries.
        assert_eq!(root.rounds(), 3);
        assert_eq!(root.queries(), 8);
    }

    #[test]
    fn rounds_never_exceed_queries() {
        let mut ledger = QueryLedger::root();
        ledger.charge_batch(1).unwrap();
        ledger.charge_batch(9).unwrap();
        assert!(ledger.rounds() <= ledger.queries());
    }
}
