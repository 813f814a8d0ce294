//! The uniform result type every top-level algorithm (and baseline) returns.

use crate::oracle::{ElementId, LedgerSnapshot};

/// Which candidate the final argmax selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    /// A threshold grid cell (threshold row, repetition within the row).
    Grid { row: usize, rep: usize },
    /// The benchmark singleton.
    Singleton,
    /// The small-element branch: the unconstrained draw for knapsack, the
    /// wholesale small set when the monotone grid is skipped.
    Unconstrained,
    /// The empty set, only reachable when every singleton is worthless.
    Empty,
    /// Single-candidate algorithms (the greedy baselines).
    Direct,
}

/// Degenerate paths taken during a run, recorded for reports and tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Note {
    /// No large elements, so the benchmark singleton was taken over the
    /// whole pool instead of the large part.
    SingletonFallback,
    /// Every singleton has nonpositive value; the threshold grid was skipped
    /// because the threshold scale would be degenerate.
    NoPositiveSingleton,
    /// The sampled pool came out empty; the threshold grid was skipped.
    EmptySample,
}

/// One milestone of a run: after `rounds` adaptive rounds had elapsed, the
/// algorithm's best feasible candidate was worth `best_value`. Intermediate
/// points use the algorithm's own bookkeeping (telescoped marginals for the
/// greedy family), which equals the true value whenever f is normalized to
/// f(emptyset) = 0; the final point always reflects the fresh evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub rounds: u64,
    pub best_value: f64,
}

/// Collects strictly improving milestones; same-round improvements collapse
/// onto one point, so `rounds` and `best_value` are both increasing.
#[derive(Debug, Default)]
pub(crate) struct TrajectoryBuilder {
    points: Vec<TrajectoryPoint>,
}

impl TrajectoryBuilder {
    pub fn new() -> Self {
        TrajectoryBuilder::default()
    }

    pub fn observe(&mut self, rounds: u64, value: f64) {
        match self.points.last_mut() {
            None => self.points.push(TrajectoryPoint { rounds, best_value: value }),
            Some(last) if value > last.best_value => {
                if last.rounds == rounds {
                    last.best_value = value;
                } else {
                    self.points.push(TrajectoryPoint { rounds, best_value: value });
                }
            }
            Some(_) => {}
        }
    }

    pub fn finish(self) -> Vec<TrajectoryPoint> {
        self.points
    }
}

/// One algorithm run. `value` is always a fresh oracle evaluation of
/// `solution`, never a number carried through intermediate bookkeeping.
/// `usage` is the ledger delta of this run alone. `wall_ms` is wall-clock
/// time and is deliberately excluded from any equality notion.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub solution: Vec<ElementId>,
    pub value: f64,
    pub cost: f64,
    pub usage: LedgerSnapshot,
    pub winner: Winner,
    pub wall_ms: f64,
    pub notes: Vec<Note>,
    /// Best-feasible-value milestones in round order, for value-versus-rounds
    /// curves. The first point sits at the run's first completed round.
    pub trajectory: Vec<TrajectoryPoint>,
}

/// A candidate entering the final argmax.
#[derive(Debug, Clone)]
pub(crate) struct Candidate {
    pub set: Vec<ElementId>,
    pub value: f64,
    pub cost: f64,
    pub winner: Winner,
}

fn tag_rank(w: Winner) -> (u8, usize, usize) {
    match w {
        Winner::Grid { row, rep } => (0, row, rep),
        Winner::Singleton => (1, 0, 0),
        Winner::Unconstrained => (2, 0, 0),
        Winner::Empty => (3, 0, 0),
        Winner::Direct => (4, 0, 0),
    }
}

/// True when b strictly beats a: larger value, then smaller cost, then
/// lexicographically smaller (sorted) set, then tag order. The full ordering
/// makes the winner independent of the order candidates are gathered in.
pub(crate) fn beats(b: &Candidate, a: &Candidate) -> bool {
    if b.value != a.value {
        return b.value > a.value;
    }
    if b.cost != a.cost {
        return b.cost < a.cost;
    }
    if b.set != a.set {
        return b.set < a.set;
    }
    tag_rank(b.winner) < tag_rank(a.winner)
}

/// Argmax with the deterministic tie-breaks above. Candidates' sets must be
/// sorted ascending. Panics on an empty slate; callers always have at least
/// one candidate.
pub(crate) fn pick_best(mut candidates: Vec<Candidate>) -> Candidate {
    let mut best = candidates.pop().expect("at least one candidate");
    for c in candidates {
        if beats(&c, &best) {
            best = c;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cand(set: Vec<ElementId>, value: f64, cost: f64, winner: Winner) -> Candidate {
        Candidate {
            set,
            value,
            cost,
            winner,
        }
    }

    #[test]
    fn value_then_cost_then_set() {
        let best = pick_best(vec![
            cand(vec![0], 2.0, 1.0, Winner::Singleton),
            cand(vec![1, 2], 3.0, 2.0, Winner::Grid { row: 0, rep: 0 }),
            cand(vec![3], 3.0, 1.0, Winner::Grid { row: 1, rep: 0 }),
        ]);
        assert_eq!(best.set, vec![3]);

        let best = pick_best(vec![
            cand(vec![5], 3.0, 1.0, Winner::Grid { row: 0, rep: 0 }),
            cand(vec![2], 3.0, 1.0, Winner::Grid { row: 0, rep: 1 }),
        ]);
        assert_eq!(best.set, vec![2]);
    }

    #[test]
    fn trajectory_keeps_only_improvements() {
        let mut t = TrajectoryBuilder::new();
        t.observe(1, -2.0);
        t.observe(3, 5.0);
        t.observe(3, 7.0);
        t.observe(4, 6.0);
        t.observe(9, 7.5);
        let pts = t.finish();
        assert_eq!(
            pts,
            vec![
                TrajectoryPoint { rounds: 1, best_value: -2.0 },
                TrajectoryPoint { rounds: 3, best_value: 7.0 },
                TrajectoryPoint { rounds: 9, best_value: 7.5 },
            ]
        );
    }

    #[test]
    fn order_of_gathering_is_irrelevant() {
        let a = cand(vec![1], 1.0, 1.0, Winner::Grid { row: 0, rep: 1 });
        let b = cand(vec![1], 1.0, 1.0, Winner::Grid { row: 0, rep: 0 });
        let fwd = pick_best(vec![a.clone(), b.clone()]);
        let rev = pick_best(vec![b, a]);
        assert_eq!(fwd.winner, rev.winner);
        assert_eq!(fwd.winner, Winner::Grid { row: 0, rep: 0 });
    }
}
