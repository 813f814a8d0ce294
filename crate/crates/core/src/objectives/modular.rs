use crate::oracle::{Cursor, ElementId, SetFunction};

/// Additive objective: f(S) = Σ_{x∈S} values[x]. The degenerate submodular
/// case, used as a test objective with predictable optima.
pub struct ModularObjective {
    values: Vec<f64>,
}

impl ModularObjective {
    pub fn new(values: Vec<f64>) -> Self {
        ModularObjective { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

pub fn modular_value(values: &[f64], members: &[ElementId]) -> f64 {
    members.iter().map(|&x| values[x]).sum()
}

impl SetFunction for ModularObjective {
    type Cursor<'a> = ModularCursor<'a>;

    fn ground_size(&self) -> usize {
        self.values.len()
    }

    fn value(&self, members: &[ElementId]) -> f64 {
        modular_value(&self.values, members)
    }

    fn cursor(&self) -> ModularCursor<'_> {
        ModularCursor {
            values: &self.values,
            inside: vec![false; self.values.len()],
            sum: 0.0,
            members: 0,
        }
    }
}

#[derive(Clone)]
pub struct ModularCursor<'a> {
    values: &'a [f64],
    inside: Vec<bool>,
    sum: f64,
    members: usize,
}

impl Cursor for ModularCursor<'_> {
    fn value(&self) -> f64 {
        self.sum
    }

    fn marginal(&self, x: ElementId) -> f64 {
        if self.inside[x] {
            0.0
        } else {
            self.values[x]
        }
    }

    fn insert(&mut self, x: ElementId) {
        if !self.inside[x] {
            self.inside[x] = true;
            self.sum += self.values[x];
            self.members += 1;
        }
    }

    fn contains(&self, x: ElementId) -> bool {
        self.inside[x]
    }

    fn len(&self) -> usize {
        self.members
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_selected_values() {
        assert_eq!(modular_value(&[1.0, 2.0, 3.0], &[0, 2]), 4.0);
        assert_eq!(modular_value(&[1.0, 2.0, 3.0], &[]), 0.0);
        assert_eq!(modular_value(&[1.0; 7], &[0, 1, 2, 3]), 4.0);
    }

    #[test]
    fn cursor_tracks_sum() {
        let f = ModularObjective::new(vec![1.0, 2.0, 3.0]);
        let mut c = f.cursor();
        assert_eq!(c.marginal(1), 2.0);
        c.insert(1);
        c.insert(1);
        assert_eq!(c.value(), 2.0);
        assert_eq!(c.len(), 1);
        assert_eq!(c.marginal(1), 0.0);
    }
}
