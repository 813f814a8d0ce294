use crate::error::{Error, Result};
use crate::oracle::function::{ElementId, SetFunction};
use crate::oracle::ledger::{GroundSet, QueryLedger};

/// Metered access to a set function.
///
/// Every evaluation goes through a ledger so that query counts and adaptive
/// rounds are observable. The oracle itself is stateless; callers thread the
/// ledger explicitly, which keeps fork/join accounting in their hands.
pub struct Oracle<'f, F: SetFunction> {
    f: &'f F,
    ground: GroundSet,
}

impl<'f, F: SetFunction> Oracle<'f, F> {
    pub fn new(f: &'f F) -> Result<Self> {
        let ground = GroundSet::new(f.ground_size())?;
        Ok(Oracle { f, ground })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn inner(&self) -> &'f F {
        self.f
    }

    fn check_set(&self, members: &[ElementId]) -> Result<()> {
        for &x in members {
            self.ground.check(x)?;
        }
        Ok(())
    }

    fn check_finite(&self, v: f64, context: &str) -> Result<f64> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite {
                context: context.to_string(),
            })
        }
    }

    /// Evaluate all sets in `batch` as one adaptive round, charging one query
    /// per set. An empty batch is free and does not open a round.
    pub fn evaluate_batch(
        &self,
        ledger: &mut QueryLedger,
        batch: &[Vec<ElementId>],
    ) -> Result<Vec<f64>> {
        for set in batch {
            self.check_set(set)?;
        }
        let mut round = ledger.begin_round()?;
        round.charge(batch.len() as u64);
        let mut out = Vec::with_capacity(batch.len());
        for set in batch {
            let v = self.f.value(set);
            out.push(self.check_finite(v, "batch evaluation")?);
        }
        Ok(out)
    }

    /// `f(x | base)` with both evaluations charged in one round (2 queries).
    pub fn marginal(
        &self,
        ledger: &mut QueryLedger,
        base: &[ElementId],
        x: ElementId,
    ) -> Result<f64> {
        self.check_set(base)?;
        self.ground.check(x)?;
        let mut round = ledger.begin_round()?;
        round.charge(2);
        let f_base = self.check_finite(self.f.value(base), "marginal base")?;
        let mut grown = base.to_vec();
        if !grown.contains(&x) {
            grown.push(x);
        }
        let f_grown = self.check_finite(self.f.value(&grown), "marginal grown")?;
        Ok(f_grown - f_base)
    }

    /// `f(x | base)` when `f(base)` is already known: one query, one round.
    pub fn marginal_with_base(
        &self,
        ledger: &mut QueryLedger,
        base: &[ElementId],
        f_base: f64,
        x: ElementId,
    ) -> Result<f64> {
        self.check_set(base)?;
        self.ground.check(x)?;
        let mut round = ledger.begin_round()?;
        round.charge(1);
        let mut grown = base.to_vec();
        if !grown.contains(&x) {
            grown.push(x);
        }
        let f_grown = self.check_finite(self.f.value(&grown), "marginal grown")?;
        Ok(f_grown - f_base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::function::FnSetFunction;

    fn triangle_cut() -> FnSetFunction<impl Fn(&[ElementId]) -> f64 + Send + Sync> {
        // Cut value on the triangle K3 with unit edge weights.
        FnSetFunction::new(3, |s: &[ElementId]| {
            let inside = |v: usize| s.contains(&v);
            let mut cut = 0.0;
            for (a, b) in [(0usize, 1usize), (0, 2), (1, 2)] {
                if inside(a) != inside(b) {
                    cut += 1.0;
                }
            }
            cut
        })
    }

    #[test]
    fn batch_charges_one_round() {
        let f = triangle_cut();
        let oracle = Oracle::new(&f).unwrap();
        let mut ledger = QueryLedger::root();
        let vals = oracle
            .evaluate_batch(&mut ledger, &[vec![0], vec![1], vec![2]])
            .unwrap();
        assert_eq!(vals, vec![2.0, 2.0, 2.0]);
        assert_eq!(ledger.rounds(), 1);
        assert_eq!(ledger.queries(), 3);
    }

    #[test]
    fn marginal_of_closing_vertex_is_negative() {
        let f = triangle_cut();
        let oracle = Oracle::new(&f).unwrap();
        let mut ledger = QueryLedger::root();
        let m = oracle.marginal(&mut ledger, &[0, 1], 2).unwrap();
        assert_eq!(m, -2.0);
        assert_eq!(ledger.rounds(), 1);
        assert_eq!(ledger.queries(), 2);
    }

    #[test]
    fn marginal_with_known_base_is_one_query() {
        let f = triangle_cut();
        let oracle = Oracle::new(&f).unwrap();
        let mut ledger = QueryLedger::root();
        let f_base = oracle.evaluate_batch(&mut ledger, &[vec![0, 1]]).unwrap()[0];
        let m = oracle.marginal_with_base(&mut ledger, &[0, 1], f_base, 2).unwrap();
        assert_eq!(m, -2.0);
        assert_eq!(ledger.rounds(), 2);
        assert_eq!(ledger.queries(), 2);
    }

    #[test]
    fn out_of_range_id_is_rejected() {
        let f = triangle_cut();
        let oracle = Oracle::new(&f).unwrap();
        let mut ledger = QueryLedger::root();
        let err = oracle.evaluate_batch(&mut ledger, &[vec![3]]).unwrap_err();
        assert!(matches!(err, Error::ElementOutOfRange { id: 3, n: 3 }));
        // Nothing was charged.
        assert_eq!(ledger.queries(), 0);
        assert_eq!(ledger.rounds(), 0);
    }

    #[test]
    fn non_finite_value_is_an_error() {
        let f = FnSetFunction::new(2, |s: &[ElementId]| {
            if s.len() == 2 {
                f64::NAN
            } else {
                s.len() as f64
            }
        });
        let oracle = Oracle::new(&f).unwrap();
        let mut ledger = QueryLedger::root();
        assert!(oracle.evaluate_batch(&mut ledger, &[vec![0]]).is_ok());
        assert!(oracle.evaluate_batch(&mut ledger, &[vec![0, 1]]).is_err());
    }
}
