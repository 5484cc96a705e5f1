use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use super::expr::{AffineExpr, Assignment, Var};
use super::rational::Rational;
use crate::error::Result;

/// Relation of an atom's expression to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    /// `> 0`
    Gt,
    /// `>= 0`
    Ge,
    /// `= 0`
    Eq,
}

impl Rel {
    pub fn holds(self, value: &Rational) -> bool {
        match self {
            Rel::Gt => value.is_positive(),
            Rel::Ge => !value.is_negative(),
            Rel::Eq => value.is_zero(),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Gt => ">",
            Rel::Ge => ">=",
            Rel::Eq => "=",
        }
    }
}

/// `expr ▷ 0`, stored normalized: the expression is a primitive integer
/// vector (constant included) and equalities have a positive leading
/// coefficient. Normalization makes syntactic equality meaningful.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    expr: AffineExpr,
    rel: Rel,
}

impl Atom {
    pub fn new(expr: AffineExpr, rel: Rel) -> Self {
        if expr.is_constant() {
            // Constant atoms only matter through their truth value.
            let c = expr.constant_term();
            let canon = if c.is_zero() {
                Rational::zero()
            } else if c.is_positive() {
                Rational::from_integer(1.into())
            } else {
                Rational::from_integer((-1).into())
            };
            return Atom {
                expr: AffineExpr::constant(canon),
                rel,
            };
        }
        let mut k = expr.integer_factor();
        let scaled = expr.scale(&k);
        // Divide out the gcd of all integer entries.
        let mut g = scaled.constant_term().numer().clone();
        for c in scaled.coeffs().values() {
            g = num_integer::Integer::gcd(&g, c.numer());
        }
        k /= Rational::from_integer(g);
        if rel == Rel::Eq {
            if let Some((_, lead)) = expr.leading() {
                if lead.is_negative() {
                    k = -k;
                }
            }
        }
        Atom {
            expr: expr.scale(&k),
            rel,
        }
    }

    pub fn gt(expr: AffineExpr) -> Self {
        Self::new(expr, Rel::Gt)
    }

    pub fn ge(expr: AffineExpr) -> Self {
        Self::new(expr, Rel::Ge)
    }

    pub fn eq(expr: AffineExpr) -> Self {
        Self::new(expr, Rel::Eq)
    }

    pub fn expr(&self) -> &AffineExpr {
        &self.expr
    }

    pub fn rel(&self) -> Rel {
        self.rel
    }

    /// Truth value of a variable-free atom.
    pub fn constant_truth(&self) -> Option<bool> {
        self.expr
            .is_constant()
            .then(|| self.rel.holds(self.expr.constant_term()))
    }

    pub fn eval(&self, point: &Assignment) -> Result<bool> {
        Ok(self.rel.holds(&self.expr.eval(point)?))
    }

    pub fn substitute(&self, v: Var, e: &AffineExpr) -> Self {
        Self::new(self.expr.substitute(v, e), self.rel)
    }

    pub fn substitute_all(&self, map: &BTreeMap<Var, AffineExpr>) -> Self {
        Self::new(self.expr.substitute_all(map), self.rel)
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.expr.mentions(v)
    }

    /// The complement as a disjunction of atoms (one atom except for `=`).
    pub fn negation(&self) -> Vec<Atom> {
        match self.rel {
            Rel::Gt => vec![Atom::ge(-&self.expr)],
            Rel::Ge => vec![Atom::gt(-&self.expr)],
            Rel::Eq => vec![Atom::gt(self.expr.clone()), Atom::gt(-&self.expr)],
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} 0", self.expr, self.rel.symbol())
    }
}
