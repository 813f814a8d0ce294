use crate::error::{Error, Result};
use crate::oracle::{Cursor, ElementId, SetFunction};

/// Weighted coverage: element `x` covers a fixed list of items, and
/// f(S) = Σ weight of items covered by at least one member. Monotone and
/// submodular; the stock example of a monotone objective in tests.
pub struct CoverageObjective {
    covers: Vec<Vec<u32>>,
    item_weights: Vec<f64>,
}

impl CoverageObjective {
    pub fn new(covers: Vec<Vec<u32>>, item_weights: Vec<f64>) -> Result<Self> {
        for (x, items) in covers.iter().enumerate() {
            for &it in items {
                if it as usize >= item_weights.len() {
                    return Err(Error::contract(
                        "coverage",
                        format!("element {x} covers item {it} outside the universe"),
                    ));
                }
            }
        }
        if let Some(&w) = item_weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::contract(
                "coverage",
                format!("item weight {w} out of range"),
            ));
        }
        Ok(CoverageObjective {
            covers,
            item_weights,
        })
    }
}

impl SetFunction for CoverageObjective {
    type Cursor<'a> = CoverageCursor<'a>;

    fn ground_size(&self) -> usize {
        self.covers.len()
    }

    fn value(&self, members: &[ElementId]) -> f64 {
        let mut covered = vec![false; self.item_weights.len()];
        let mut total = 0.0;
        for &x in members {
            for &it in &self.covers[x] {
                let it = it as usize;
                if !covered[it] {
                    covered[it] = true;
                    total += self.item_weights[it];
                }
            }
        }
        total
    }

    fn cursor(&self) -> CoverageCursor<'_> {
        CoverageCursor {
            obj: self,
            inside: vec![false; self.covers.len()],
            times_covered: vec![0u32; self.item_weights.len()],
            value: 0.0,
            members: 0,
        }
    }
}

#[derive(Clone)]
pub struct CoverageCursor<'a> {
    obj: &'a CoverageObjective,
    inside: Vec<bool>,
    times_covered: Vec<u32>,
    value: f64,
    members: usize,
}

impl Cursor for CoverageCursor<'_> {
    fn value(&self) -> f64 {
        self.value
    }

    fn marginal(&self, x: ElementId) -> f64 {
        if self.inside[x] {
            return 0.0;
        }
        self.obj.covers[x]
            .iter()
            .filter(|&&it| self.times_covered[it as usize] == 0)
            .map(|&it| self.obj.item_weights[it as usize])
            .sum()
    }

    fn insert(&mut self, x: ElementId) {
        if self.inside[x] {
            return;
        }
        self.value += self.marginal(x);
        self.inside[x] = true;
        self.members += 1;
        for &it in &self.obj.covers[x] {
            self.times_covered[it as usize] += 1;
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
    use crate::oracle::{check_monotone, check_submodular_exhaustive};

    fn small() -> CoverageObjective {
        CoverageObjective::new(
            vec![vec![0, 1], vec![1, 2], vec![3], vec![0, 3]],
            vec![1.0, 2.0, 4.0, 0.5],
        )
        .unwrap()
    }

    #[test]
    fn counts_each_item_once() {
        let f = small();
        assert_eq!(f.value(&[]), 0.0);
        assert_eq!(f.value(&[0]), 3.0);
        assert_eq!(f.value(&[0, 1]), 7.0);
        assert_eq!(f.value(&[0, 1, 2, 3]), 7.5);
    }

    #[test]
    fn cursor_matches_scratch() {
        let f = small();
        let mut c = f.cursor();
        assert_eq!(c.marginal(1), 6.0);
        c.insert(1);
        assert_eq!(c.marginal(0), 1.0);
        c.insert(0);
        assert_eq!(c.value(), f.value(&[0, 1]));
    }

    #[test]
    fn monotone_and_submodular() {
        let f = small();
        assert!(check_monotone(&f, 2000, 1).is_ok());
        assert!(check_submodular_exhaustive(&f).unwrap().holds);
    }

    #[test]
    fn universe_bounds_checked() {
        assert!(CoverageObjective::new(vec![vec![2]], vec![1.0]).is_err());
    }
}
