//! Helpers for writing membership conditions over blocks of variables.

use crate::linarith::{AffineExpr, Assignment, Formula, Rational, Var};
use crate::qe::{self, Ray};

use super::SemilinearSet;

/// Allocates disjoint variable blocks of the ambient dimension, followed
/// by scalars.
pub(crate) struct Vars {
    dim: usize,
    next: u32,
}

impl Vars {
    pub fn new(dim: usize) -> Self {
        Vars { dim, next: 0 }
    }

    pub fn block(&mut self) -> Vec<Var> {
        let out = (0..self.dim as u32).map(|i| Var(self.next + i)).collect();
        self.next += self.dim as u32;
        out
    }

    pub fn scalar(&mut self) -> Var {
        let v = Var(self.next);
        self.next += 1;
        v
    }
}

pub(crate) fn exprs(vs: &[Var]) -> Vec<AffineExpr> {
    vs.iter().map(|v| AffineExpr::var(*v)).collect()
}

pub(crate) fn consts(p: &[Rational]) -> Vec<AffineExpr> {
    p.iter().map(|c| AffineExpr::constant(c.clone())).collect()
}

pub(crate) fn add(a: &[AffineExpr], b: &[AffineExpr]) -> Vec<AffineExpr> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn sub(a: &[AffineExpr], b: &[AffineExpr]) -> Vec<AffineExpr> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn neg(a: &[AffineExpr]) -> Vec<AffineExpr> {
    a.iter().map(|x| -x).collect()
}

/// Some coordinate of `v` is nonzero.
pub(crate) fn nonzero(v: &[AffineExpr]) -> Formula {
    Formula::or(v.iter().map(|e| Formula::ne(e.clone())))
}

/// The ray `base + t·dir` in the coordinates of `set`.
pub(crate) fn ray(set: &SemilinearSet, base: Vec<AffineExpr>, dir: Vec<AffineExpr>) -> Ray {
    Ray::new(&SemilinearSet::coords(set.dim()), base, dir)
}

/// `∀t ≥ 1: base + t·dir ∈ set` (set convex).
pub(crate) fn from_one(set: &SemilinearSet, base: &[AffineExpr], dir: &[AffineExpr]) -> Formula {
    qe::holds_from_one(set.formula(), &ray(set, base.to_vec(), dir.to_vec()))
}

/// `∀t ∈ ℚ: base + t·dir ∈ set` (set convex).
pub(crate) fn on_line(set: &SemilinearSet, base: &[AffineExpr], dir: &[AffineExpr]) -> Formula {
    qe::holds_on_line(set.formula(), &ray(set, base.to_vec(), dir.to_vec()))
}

/// The values of a block in an assignment (missing variables read as 0).
pub(crate) fn read(point: &Assignment, block: &[Var]) -> Vec<Rational> {
    block
        .iter()
        .map(|v| point.get(v).cloned().unwrap_or_default())
        .collect()
}
