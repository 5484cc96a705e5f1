use super::encode::{exprs, nonzero, read, sub, Vars};
use super::{Evidence, OVSpace, Verdict};
use crate::error::{Error, Result};
use crate::linarith::{AffineExpr, Formula, Rational, Var};
use crate::qe;

impl OVSpace {
    fn check_lattice_dim(&self) -> Result<()> {
        let max = self.settings().lattice_dim_max;
        if self.dim() > max {
            return Err(Error::DimensionTooLarge { dim: self.dim(), max });
        }
        Ok(())
    }

    /// `s` is a least upper bound of `{u, v}` (all three symbolic).
    fn sup_condition(&self, u: &[AffineExpr], v: &[AffineExpr], s: &[AffineExpr], w: &[Var]) -> Result<Formula> {
        let k = |p: &[AffineExpr]| self.positive().at(p);
        let we = exprs(w);
        let undercut = Formula::and([k(&sub(&we, u)), k(&sub(&we, v)), k(&sub(&we, s)).negate()]);
        let undercut = qe::eliminate_exists(&undercut, &w.iter().copied().collect(), self.budget())?;
        Ok(Formula::and([k(&sub(s, u)), k(&sub(s, v)), undercut.negate()]))
    }

    /// The least upper bound of `u` and `v` when it exists; a supremum set
    /// with more than one point is reported as `NonUniqueSupremum`.
    pub fn exists_sup(&self, u: &[Rational], v: &[Rational]) -> Result<Option<Vec<Rational>>> {
        self.check_lattice_dim()?;
        for p in [u, v] {
            if p.len() != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    found: p.len(),
                });
            }
        }
        let n = self.dim();
        let mut vars = Vars::new(n);
        let s = vars.block();
        let w = vars.block();
        let consts = |p: &[Rational]| -> Vec<AffineExpr> {
            p.iter().map(|c| AffineExpr::constant(c.clone())).collect()
        };
        let se = exprs(&s);
        let cond = self.sup_condition(&consts(u), &consts(v), &se, &w)?;
        let b = self.budget();
        let Some(p) = qe::find_point(&cond, &s, b)? else {
            return Ok(None);
        };
        let first = read(&p, &s);
        let other = Formula::and([cond, nonzero(&sub(&se, &consts(&first)))]);
        if qe::satisfiable(&other, b)? {
            return Err(Error::NonUniqueSupremum);
        }
        Ok(Some(first))
    }

    /// Every pair has a least upper bound. Since `sup(u, v) = u + sup(0,
    /// v − u)`, it suffices to check pairs with `u = 0`.
    pub fn riesz_verdict(&self) -> Result<Verdict> {
        self.check_lattice_dim()?;
        let n = self.dim();
        let mut vars = Vars::new(n);
        let v = vars.block();
        let s = vars.block();
        let w = vars.block();
        let zero = vec![AffineExpr::zero(); n];
        let cond = self.sup_condition(&zero, &exprs(&v), &exprs(&s), &w)?;
        let b = self.budget();
        let has_sup = qe::eliminate_exists(&cond, &s.iter().copied().collect(), b)?;
        Ok(match qe::find_point(&has_sup.negate(), &v, b)? {
            Some(p) => Verdict::no(
                Evidence::new()
                    .with("u", vec![Rational::default(); n])
                    .with("v", read(&p, &v)),
            ),
            None => Verdict::yes(),
        })
    }

    pub fn is_riesz(&self) -> Result<bool> {
        Ok(self.riesz_verdict()?.holds)
    }

    /// The Riesz check over all pairs, without the translation reduction.
    pub fn riesz_all_pairs(&self) -> Result<bool> {
        self.check_lattice_dim()?;
        let n = self.dim();
        let mut vars = Vars::new(n);
        let u = vars.block();
        let v = vars.block();
        let s = vars.block();
        let w = vars.block();
        let cond = self.sup_condition(&exprs(&u), &exprs(&v), &exprs(&s), &w)?;
        let b = self.budget();
        let has_sup = qe::eliminate_exists(&cond, &s.iter().copied().collect(), b)?;
        qe::valid(&has_sup, b)
    }
}
