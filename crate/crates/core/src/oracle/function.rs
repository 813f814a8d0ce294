/// Elements are dense indices into the ground set.
pub type ElementId = usize;

/// A real-valued set function `f` on a dense ground set `0..n`.
///
/// `value` evaluates from scratch and is the semantic reference. `cursor` opens
/// an incremental evaluator positioned at the empty set; concrete objectives
/// override its operations with O(degree)-style updates so that prefix scans do
/// not pay a full evaluation per marginal. Both paths must agree up to float
/// roundoff; tests hold them to that.
pub trait SetFunction: Send + Sync {
    type Cursor<'a>: Cursor
    where
        Self: 'a;

    fn ground_size(&self) -> usize;

    /// `f(S)` for `S` given as a duplicate-free id slice (any order).
    fn value(&self, members: &[ElementId]) -> f64;

    /// Incremental evaluator positioned at the empty set.
    fn cursor(&self) -> Self::Cursor<'_>;
}

/// Incremental evaluation state for one growing set `T`.
pub trait Cursor: Clone + Send {
    /// Current `f(T)`.
    fn value(&self) -> f64;

    /// `f(x | T) = f(T + x) - f(T)`; zero when `x` is already in `T`.
    fn marginal(&self, x: ElementId) -> f64;

    /// Grow `T` by `x` (no-op if already present).
    fn insert(&mut self, x: ElementId);

    fn contains(&self, x: ElementId) -> bool;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Wrap a closure as a [`SetFunction`]; evaluation state falls back to
/// [`GenericCursor`], which re-evaluates from scratch. Meant for tests and
/// one-off objectives, not for large instances.
pub struct FnSetFunction<G> {
    n: usize,
    f: G,
}

impl<G> FnSetFunction<G>
where
    G: Fn(&[ElementId]) -> f64 + Send + Sync,
{
    pub fn new(n: usize, f: G) -> Self {
        FnSetFunction { n, f }
    }
}

impl<G> SetFunction for FnSetFunction<G>
where
    G: Fn(&[ElementId]) -> f64 + Send + Sync,
{
    type Cursor<'a>
        = GenericCursor<'a, Self>
    where
        Self: 'a;

    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, members: &[ElementId]) -> f64 {
        (self.f)(members)
    }

    fn cursor(&self) -> Self::Cursor<'_> {
        GenericCursor::new(self)
    }
}

/// Fallback cursor: keeps the member list and calls `value` for every update.
pub struct GenericCursor<'a, F: SetFunction + ?Sized> {
    f: &'a F,
    inside: Vec<bool>,
    members: Vec<ElementId>,
    value: f64,
}

impl<'a, F: SetFunction + ?Sized> GenericCursor<'a, F> {
    pub fn new(f: &'a F) -> Self {
        let value = f.value(&[]);
        GenericCursor {
            f,
            inside: vec![false; f.ground_size()],
            members: Vec::new(),
            value,
        }
    }
}

impl<F: SetFunction + ?Sized> Clone for GenericCursor<'_, F> {
    fn clone(&self) -> Self {
        GenericCursor {
            f: self.f,
            inside: self.inside.clone(),
            members: self.members.clone(),
            value: self.value,
        }
    }
}

impl<F: SetFunction + ?Sized> Cursor for GenericCursor<'_, F> {
    fn value(&self) -> f64 {
        self.value
    }

    fn marginal(&self, x: ElementId) -> f64 {
        if self.inside[x] {
            return 0.0;
        }
        let mut grown = self.members.clone();
        grown.push(x);
        self.f.value(&grown) - self.value
    }

    fn insert(&mut self, x: ElementId) {
        if self.inside[x] {
            return;
        }
        self.inside[x] = true;
        self.members.push(x);
        self.value = self.f.value(&self.members);
    }

    fn contains(&self, x: ElementId) -> bool {
        self.inside[x]
    }

    fn len(&self) -> usize {
        self.members.len()
    }
}
