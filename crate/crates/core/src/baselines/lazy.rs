//! Lazy evaluation for the sequential baselines.
//!
//! The heap stores a stale upper bound per element: a marginal measured
//! against some earlier, smaller solution. Submodularity keeps every stored
//! bound at or above the element's current marginal, so when the top entry's
//! bound is fresh it is the true argmax, and when the top bound is
//! nonpositive the whole pool is worthless and the caller can stop without
//! another query.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::oracle::ElementId;

#[derive(Debug, Clone, Copy)]
struct Entry {
    bound: f64,
    /// Pick-counter value at which the bound was measured; equal to the
    /// caller's current counter means the bound is exact.
    stamp: u64,
    id: ElementId,
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap on bound; equal bounds pop the smaller id first, which is
        // what makes lazy and naive greedy pick identical elements on ties.
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.id.cmp(&self.id))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

/// Priority queue of (element, stale marginal upper bound).
#[derive(Debug, Default)]
pub struct LazyHeap {
    heap: BinaryHeap<Entry>,
    refreshes: u64,
}

impl LazyHeap {
    pub fn new() -> Self {
        LazyHeap::default()
    }

    pub fn push(&mut self, id: ElementId, bound: f64, stamp: u64) {
        self.heap.push(Entry { bound, stamp, id });
    }

    /// (element, bound, stamp) with the largest bound, smallest id on ties.
    pub fn pop(&mut self) -> Option<(ElementId, f64, u64)> {
        self.heap.pop().map(|e| (e.id, e.bound, e.stamp))
    }

    pub fn peek_bound(&self) -> Option<f64> {
        self.heap.peek().map(|e| e.bound)
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    /// Called once per stale re-evaluation; the counter feeds reports that
    /// show how much work laziness actually saved.
    pub fn note_refresh(&mut self) {
        self.refreshes += 1;
    }

    pub fn refreshes(&self) -> u64 {
        self.refreshes
    }
}
