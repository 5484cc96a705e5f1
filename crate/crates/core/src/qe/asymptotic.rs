//! Eventual truth along a ray.
//!
//! Substituting `z := p + t·d` into a linear atom gives `α + t·β` with `α`
//! and `β` affine in the remaining variables. For a fixed assignment the
//! atom is eventually constant as `t → ∞` (or as `t → 0⁺`), and that
//! eventual value is itself a quantifier-free condition on `α` and `β`.
//! Because every atom stabilizes, the eventual value of a boolean
//! combination is the same combination of eventual atom values.

use std::collections::BTreeMap;

use crate::linarith::{AffineExpr, Atom, Formula, Rel, Var};

/// Which end of the parameter range is examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    /// `t → +∞`
    AtInfinity,
    /// `t → 0⁺`
    NearZero,
}

/// The line `z = base + t·dir` in the coordinates `z`.
#[derive(Debug, Clone)]
pub struct Ray {
    base: BTreeMap<Var, AffineExpr>,
    dir: BTreeMap<Var, AffineExpr>,
}

impl Ray {
    /// `coords[i] := base[i] + t·dir[i]`.
    pub fn new(coords: &[Var], base: Vec<AffineExpr>, dir: Vec<AffineExpr>) -> Ray {
        assert_eq!(coords.len(), base.len());
        assert_eq!(coords.len(), dir.len());
        Ray {
            base: coords.iter().copied().zip(base).collect(),
            dir: coords.iter().copied().zip(dir).collect(),
        }
    }

    /// The same ray traversed backwards.
    pub fn reversed(&self) -> Ray {
        Ray {
            base: self.base.clone(),
            dir: self.dir.iter().map(|(v, e)| (*v, -e)).collect(),
        }
    }

    /// The formula at the point `base + dir` (that is, `t = 1`).
    pub fn at_one(&self, f: &Formula) -> Formula {
        let point = self
            .base
            .iter()
            .map(|(v, b)| (*v, b + &self.dir[v]))
            .collect();
        f.substitute_all(&point)
    }

    fn split(&self, a: &Atom) -> (AffineExpr, AffineExpr) {
        (a.expr().substitute_all(&self.base), a.expr().linear_apply(&self.dir))
    }
}

fn atom_eventually(alpha: AffineExpr, beta: AffineExpr, rel: Rel, limit: Limit) -> Formula {
    // (lead, tail): the coefficient that dominates, then the tie-breaker.
    let (lead, tail) = match limit {
        Limit::AtInfinity => (beta, alpha),
        Limit::NearZero => (alpha, beta),
    };
    match rel {
        Rel::Eq => Formula::and([Formula::eq(lead), Formula::eq(tail)]),
        Rel::Gt => Formula::or([
            Formula::gt(lead.clone()),
            Formula::and([Formula::eq(lead), Formula::gt(tail)]),
        ]),
        Rel::Ge => Formula::or([
            Formula::gt(lead.clone()),
            Formula::and([Formula::eq(lead), Formula::ge(tail)]),
        ]),
    }
}

/// Holds exactly when `f(base + t·dir)` holds for all sufficiently large
/// `t` (or all sufficiently small positive `t`).
pub fn eventually(f: &Formula, ray: &Ray, limit: Limit) -> Formula {
    f.map_atoms(&mut |a| {
        let (alpha, beta) = ray.split(a);
        atom_eventually(alpha, beta, a.rel(), limit)
    })
}

/// `∀t ≥ 1: f(base + t·dir)`, valid when `f` describes a convex set: the
/// parameters where `f` holds form an interval, so it contains `[1, ∞)`
/// iff it contains 1 and is unbounded above.
pub fn holds_from_one(f: &Formula, ray: &Ray) -> Formula {
    Formula::and([ray.at_one(f), eventually(f, ray, Limit::AtInfinity)])
}

/// `∀t ∈ ℚ: f(base + t·dir)`, valid for convex `f`.
pub fn holds_on_line(f: &Formula, ray: &Ray) -> Formula {
    Formula::and([
        eventually(f, ray, Limit::AtInfinity),
        eventually(f, &ray.reversed(), Limit::AtInfinity),
    ])
}

/// `∀t > 0: f(base + t·dir)`, valid for convex `f`.
pub fn holds_on_open_ray(f: &Formula, ray: &Ray) -> Formula {
    Formula::and([
        eventually(f, ray, Limit::NearZero),
        eventually(f, ray, Limit::AtInfinity),
    ])
}
