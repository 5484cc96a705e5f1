use num_traits::{One, Zero};

use super::{LinearMap, OVSpace, SemilinearSet, Subspace};
use crate::error::{Error, Result};
use crate::linalg::{rref, Matrix};
use crate::linarith::Rational;
use crate::qe;

/// A presentation of `V/N`: the ideal, a complement, and a projection
/// `p` onto complement coordinates with kernel exactly `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientPresentation {
    pub ideal: Subspace,
    pub complement: Vec<Vec<Rational>>,
    pub projection: LinearMap,
}

impl QuotientPresentation {
    /// Complement spanned by the standard vectors of the non-pivot columns
    /// of the ideal's echelon basis.
    pub fn standard(ideal: &Subspace) -> Self {
        let n = ideal.ambient_dim();
        let e = rref(ideal.basis(), n);
        let free: Vec<usize> = (0..n).filter(|j| !e.pivots.contains(j)).collect();
        // p(x)_j = x_j − Σ_i x_{pivot_i}·R[i][j]
        let rows: Vec<Vec<Rational>> = free
            .iter()
            .map(|&j| {
                let mut row = vec![Rational::zero(); n];
                row[j] = Rational::one();
                for (r, &p) in e.rows.iter().zip(&e.pivots) {
                    row[p] = -r[j].clone();
                }
                row
            })
            .collect();
        let complement = free
            .iter()
            .map(|&j| {
                let mut v = vec![Rational::zero(); n];
                v[j] = Rational::one();
                v
            })
            .collect();
        QuotientPresentation {
            ideal: Subspace::from_spanning(n, ideal.basis()),
            complement,
            projection: LinearMap::from_rows(rows, n).expect("rows have ambient length"),
        }
    }

    /// A presentation for a caller-chosen complement.
    pub fn with_complement(ideal: &Subspace, complement: Vec<Vec<Rational>>) -> Result<Self> {
        let n = ideal.ambient_dim();
        if ideal.dim() + complement.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n - ideal.dim(),
                found: complement.len(),
            });
        }
        let mut cols: Vec<Vec<Rational>> = ideal.basis().to_vec();
        cols.extend(complement.iter().cloned());
        let inv = Matrix::from_columns(&cols, n)?.inverse()?;
        let rows = (ideal.dim()..n).map(|i| inv.row(i).to_vec()).collect();
        Ok(QuotientPresentation {
            ideal: ideal.clone(),
            complement,
            projection: LinearMap::from_rows(rows, n)?,
        })
    }

    pub fn quotient_dim(&self) -> usize {
        self.complement.len()
    }

    /// The inclusion of the complement: quotient coordinates to `V`.
    pub fn section(&self) -> LinearMap {
        let n = self.ideal.ambient_dim();
        LinearMap::new(Matrix::from_columns(&self.complement, n).expect("complement vectors have ambient length"))
    }

    /// Checks `p ∘ section = id` and `p(N) = 0`.
    pub fn verify(&self) -> bool {
        let Ok(ps) = self.projection.compose(&self.section()) else {
            return false;
        };
        ps == LinearMap::identity(self.quotient_dim())
            && self.ideal.basis().iter().all(|b| {
                self.projection
                    .apply(b)
                    .is_ok_and(|v| v.iter().all(Zero::is_zero))
            })
    }
}

impl OVSpace {
    /// `V/N` ordered by the image of `V₊`.
    pub fn quotient(&self, ideal: &Subspace) -> Result<(OVSpace, QuotientPresentation)> {
        self.check_ideal(ideal)?;
        let pres = QuotientPresentation::standard(ideal);
        Ok((self.image(&pres)?, pres))
    }

    /// As [`OVSpace::quotient`], with an explicit complement.
    pub fn quotient_with_complement(
        &self,
        ideal: &Subspace,
        complement: Vec<Vec<Rational>>,
    ) -> Result<(OVSpace, QuotientPresentation)> {
        self.check_ideal(ideal)?;
        let pres = QuotientPresentation::with_complement(ideal, complement)?;
        Ok((self.image(&pres)?, pres))
    }

    fn check_ideal(&self, ideal: &Subspace) -> Result<()> {
        if ideal.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: ideal.ambient_dim(),
            });
        }
        if !self.is_order_ideal(&ideal.to_set())? {
            return Err(Error::NotAnOrderIdeal);
        }
        Ok(())
    }

    fn image(&self, pres: &QuotientPresentation) -> Result<OVSpace> {
        let positive: SemilinearSet = qe::project(self.positive(), &pres.projection, self.budget())?;
        Ok(self.derived(positive))
    }
}
