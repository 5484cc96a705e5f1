use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{format_vector, rank_of, rref, Matrix};
use crate::linarith::{assignment, AffineExpr, Formula, Rational, Var};
use crate::qe::{self, Budget};

/// A subset of `ℚⁿ` described by a quantifier-free formula in `x1..xn`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearSet {
    dim: usize,
    formula: Formula,
}

impl SemilinearSet {
    pub fn new(dim: usize, formula: Formula) -> Result<Self> {
        if let Some(v) = formula.free_vars().into_iter().find(|v| v.index() >= dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.index() + 1,
            });
        }
        Ok(SemilinearSet { dim, formula })
    }

    /// Parses the textual formula syntax.
    pub fn parse(dim: usize, text: &str) -> Result<Self> {
        Self::new(dim, text.parse()?)
    }

    /// `x1, ..., xn`.
    pub fn coords(n: usize) -> Vec<Var> {
        (0..n).map(Var::coord).collect()
    }

    pub fn full(dim: usize) -> Self {
        SemilinearSet {
            dim,
            formula: Formula::True,
        }
    }

    pub fn empty(dim: usize) -> Self {
        SemilinearSet {
            dim,
            formula: Formula::False,
        }
    }

    /// `{0}`.
    pub fn origin(dim: usize) -> Self {
        SemilinearSet {
            dim,
            formula: Formula::and(Self::coords(dim).into_iter().map(|v| Formula::eq(AffineExpr::var(v)))),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn contains(&self, point: &[Rational]) -> Result<bool> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        self.formula.eval(&assignment(point))
    }

    /// Membership of a symbolic point given by one expression per coordinate.
    pub fn at(&self, point: &[AffineExpr]) -> Formula {
        debug_assert_eq!(point.len(), self.dim);
        let map: BTreeMap<Var, AffineExpr> = Self::coords(self.dim)
            .into_iter()
            .zip(point.iter().cloned())
            .collect();
        self.formula.substitute_all(&map)
    }

    /// `−S`.
    pub fn negated(&self) -> Self {
        let point: Vec<AffineExpr> = Self::coords(self.dim)
            .into_iter()
            .map(|v| -AffineExpr::var(v))
            .collect();
        SemilinearSet {
            dim: self.dim,
            formula: self.at(&point),
        }
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(SemilinearSet {
            dim: self.dim,
            formula: Formula::and([self.formula.clone(), other.formula.clone()]),
        })
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(SemilinearSet {
            dim: self.dim,
            formula: Formula::or([self.formula.clone(), other.formula.clone()]),
        })
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn equivalent(&self, other: &Self, budget: &Budget) -> Result<bool> {
        self.same_dim(other)?;
        qe::equivalent(&self.formula, &other.formula, budget)
    }

    pub fn is_subset(&self, other: &Self, budget: &Budget) -> Result<bool> {
        self.same_dim(other)?;
        qe::valid(&Formula::implies(self.formula.clone(), other.formula.clone()), budget)
    }

    pub fn is_empty(&self, budget: &Budget) -> Result<bool> {
        Ok(!qe::satisfiable(&self.formula, budget)?)
    }

    /// The same set with a canonical (cell-merged) formula.
    pub fn simplified(&self, budget: &Budget) -> Result<Self> {
        Ok(SemilinearSet {
            dim: self.dim,
            formula: qe::simplify(&self.formula, budget)?,
        })
    }
}

impl fmt::Display for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.formula)
    }
}

/// A linear map `ℚⁿ → ℚᵐ` given by an `m × n` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    matrix: Matrix,
}

impl LinearMap {
    pub fn new(matrix: Matrix) -> Self {
        LinearMap { matrix }
    }

    /// An `m × n` map; `domain_dim` is needed when `m = 0`.
    pub fn from_rows(rows: Vec<Vec<Rational>>, domain_dim: usize) -> Result<Self> {
        Ok(LinearMap {
            matrix: Matrix::from_rows(rows, domain_dim)?,
        })
    }

    pub fn identity(n: usize) -> Self {
        LinearMap {
            matrix: Matrix::identity(n),
        }
    }

    pub fn zero(codomain: usize, domain: usize) -> Self {
        LinearMap {
            matrix: Matrix::zeros(codomain, domain),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn domain_dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        self.matrix.apply(v)
    }

    /// The image of a symbolic point.
    pub fn apply_exprs(&self, v: &[AffineExpr]) -> Vec<AffineExpr> {
        (0..self.codomain_dim())
            .map(|i| {
                let mut acc = AffineExpr::zero();
                for (j, e) in v.iter().enumerate() {
                    let c = self.matrix.get(i, j);
                    if !c.is_zero() {
                        acc = acc + e.scale(c);
                    }
                }
                acc
            })
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        Ok(LinearMap {
            matrix: self.matrix.mul(&inner.matrix)?,
        })
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.codomain_dim()
    }

    pub fn kernel(&self) -> Subspace {
        Subspace::from_spanning(self.domain_dim(), &self.matrix.null_space())
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

impl fmt::Display for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix)
    }
}

/// A linear subspace of `ℚⁿ` with a basis in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    /// Rejects dependent vectors; the given basis is kept as is.
    pub fn new(ambient: usize, basis: Vec<Vec<Rational>>) -> Result<Self> {
        for b in &basis {
            if b.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: b.len(),
                });
            }
        }
        if rank_of(&basis, ambient) != basis.len() {
            return Err(Error::LinearlyDependent);
        }
        Ok(Subspace { ambient, basis })
    }

    /// The span of arbitrary vectors, with an echelon basis.
    pub fn from_spanning(ambient: usize, vectors: &[Vec<Rational>]) -> Self {
        Subspace {
            ambient,
            basis: rref(vectors, ambient).rows,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Same span, echelon basis.
    pub fn canonical(&self) -> Self {
        Self::from_spanning(self.ambient, &self.basis)
    }

    /// Functionals whose common zero set is the subspace.
    pub fn annihilator(&self) -> Vec<Vec<Rational>> {
        if self.basis.is_empty() {
            return (0..self.ambient)
                .map(|i| {
                    let mut e = vec![Rational::zero(); self.ambient];
                    e[i] = Rational::from_integer(1.into());
                    e
                })
                .collect();
        }
        Matrix::from_rows(self.basis.clone(), self.ambient)
            .expect("basis rows have ambient length")
            .null_space()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rank_of(&rows, self.ambient) == self.basis.len()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn same_span(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }

    /// Membership as a conjunction of linear equations.
    pub fn to_set(&self) -> SemilinearSet {
        let coords = SemilinearSet::coords(self.ambient);
        let formula = Formula::and(self.annihilator().into_iter().map(|c| {
            Formula::eq(AffineExpr::linear(
                coords.iter().copied().zip(c).filter(|(_, x)| !x.is_zero()),
            ))
        }));
        SemilinearSet {
            dim: self.ambient,
            formula,
        }
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.basis.iter().map(|b| format_vector(b)).collect();
        write!(f, "span{{{}}}", parts.join(", "))
    }
}
