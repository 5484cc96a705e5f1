use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

/// A variable, printed as `x1`, `x2`, ... (one-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Var(pub u32);

impl Var {
    /// The variable for coordinate `i` (zero-based).
    pub fn coord(i: usize) -> Var {
        Var(i as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0 + 1)
    }
}

/// An assignment of rational values to variables.
pub type Assignment = BTreeMap<Var, Rational>;

/// Builds the assignment `x1 = v[0], x2 = v[1], ...`.
pub fn assignment(values: &[Rational]) -> Assignment {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| (Var::coord(i), v.clone()))
        .collect()
}

/// `c·x + b` in sparse canonical form: zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AffineExpr {
    coeffs: BTreeMap<Var, Rational>,
    constant: Rational,
}

impl AffineExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(v: Var) -> Self {
        Self::term(v, Rational::one())
    }

    pub fn term(v: Var, c: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(v, c);
        e
    }

    /// `Σ cᵢ·vᵢ` for parallel slices.
    pub fn linear(terms: impl IntoIterator<Item = (Var, Rational)>) -> Self {
        let mut e = Self::zero();
        for (v, c) in terms {
            e.add_term(v, c);
        }
        e
    }

    pub fn add_term(&mut self, v: Var, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(v).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&v);
        }
    }

    pub fn add_constant(&mut self, c: &Rational) {
        self.constant += c;
    }

    pub fn coeff(&self, v: Var) -> Rational {
        self.coeffs.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<Var, Rational> {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.coeffs.contains_key(&v)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        out.extend(self.coeffs.keys().copied());
    }

    pub fn leading(&self) -> Option<(Var, &Rational)> {
        self.coeffs.iter().next().map(|(v, c)| (*v, c))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(v, c)| (*v, c * k)).collect(),
            constant: &self.constant * k,
        }
    }

    /// The expression without its constant term.
    pub fn linear_part(&self) -> Self {
        Self {
            coeffs: self.coeffs.clone(),
            constant: Rational::zero(),
        }
    }

    pub fn eval(&self, point: &Assignment) -> Result<Rational> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            let value = point.get(v).ok_or(Error::UnassignedVariable(*v))?;
            acc += c * value;
        }
        Ok(acc)
    }

    /// Replaces `v` by `e`.
    pub fn substitute(&self, v: Var, e: &AffineExpr) -> Self {
        match self.coeffs.get(&v) {
            None => self.clone(),
            Some(c) => {
                let c = c.clone();
                let mut out = self.clone();
                out.coeffs.remove(&v);
                out + e.scale(&c)
            }
        }
    }

    /// Simultaneous substitution; variables missing from `map` are kept.
    pub fn substitute_all(&self, map: &BTreeMap<Var, AffineExpr>) -> Self {
        let mut out = Self::constant(self.constant.clone());
        for (v, c) in &self.coeffs {
            match map.get(v) {
                Some(e) => out = out + e.scale(c),
                None => out.add_term(*v, c.clone()),
            }
        }
        out
    }

    /// Applies the linear part to a direction: `Σ cᵥ·dᵥ` (no constant).
    /// Variables absent from `direction` contribute nothing.
    pub fn linear_apply(&self, direction: &BTreeMap<Var, AffineExpr>) -> Self {
        let mut out = Self::zero();
        for (v, c) in &self.coeffs {
            if let Some(d) = direction.get(v) {
                out = out + d.scale(c);
            }
        }
        out
    }

    /// Positive factor making the linear part a primitive integer vector.
    /// Returns `None` for constant expressions.
    pub(crate) fn primitive_factor(&self) -> Option<Rational> {
        if self.coeffs.is_empty() {
            return None;
        }
        let mut den_lcm = num_bigint::BigInt::one();
        for c in self.coeffs.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = num_bigint::BigInt::zero();
        for c in self.coeffs.values() {
            let scaled = (c.numer() * &den_lcm) / c.denom();
            num_gcd = num_gcd.gcd(&scaled);
        }
        Some(Rational::new(den_lcm, num_gcd.abs()))
    }

    /// Smallest positive factor clearing every denominator, constant included.
    pub(crate) fn integer_factor(&self) -> Rational {
        let mut den_lcm = self.constant.denom().clone();
        for c in self.coeffs.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        Rational::from_integer(den_lcm)
    }
}

impl Add for AffineExpr {
    type Output = AffineExpr;
    fn add(mut self, rhs: AffineExpr) -> AffineExpr {
        for (v, c) in rhs.coeffs {
            self.add_term(v, c);
        }
        self.constant += rhs.constant;
        self
    }
}

impl Add<&AffineExpr> for &AffineExpr {
    type Output = AffineExpr;
    fn add(self, rhs: &AffineExpr) -> AffineExpr {
        self.clone() + rhs.clone()
    }
}

impl Sub for AffineExpr {
    type Output = AffineExpr;
    fn sub(self, rhs: AffineExpr) -> AffineExpr {
        self + (-rhs)
    }
}

impl Sub<&AffineExpr> for &AffineExpr {
    type Output = AffineExpr;
    fn sub(self, rhs: &AffineExpr) -> AffineExpr {
        self.clone() - rhs.clone()
    }
}

impl Neg for AffineExpr {
    type Output = AffineExpr;
    fn neg(self) -> AffineExpr {
        AffineExpr {
            coeffs: self.coeffs.into_iter().map(|(v, c)| (v, -c)).collect(),
            constant: -self.constant,
        }
    }
}

impl Neg for &AffineExpr {
    type Output = AffineExpr;
    fn neg(self) -> AffineExpr {
        -self.clone()
    }
}

impl Mul<&Rational> for &AffineExpr {
    type Output = AffineExpr;
    fn mul(self, k: &Rational) -> AffineExpr {
        self.scale(k)
    }
}

impl fmt::Display for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.coeffs {
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if magnitude.is_one() {
                write!(f, "{v}")?;
            } else {
                write!(f, "{}*{v}", format_rational(&magnitude))?;
            }
            first = false;
        }
        if first {
            return f.write_str(&format_rational(&self.constant));
        }
        if !self.constant.is_zero() {
            let sign = if self.constant.is_negative() { "-" } else { "+" };
            write!(f, " {sign} {}", format_rational(&self.constant.abs()))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linarith::rational::{int, rat};

    fn x(i: u32) -> Var {
        Var(i - 1)
    }

    #[test]
    fn canonical_sparse_form() {
        let mut e = AffineExpr::term(x(1), int(2));
        e.add_term(x(1), int(-2));
        assert!(e.is_constant());
        assert!(e.coeffs().is_empty());
    }

    #[test]
    fn display() {
        let e = AffineExpr::linear([(x(1), int(1)), (x(2), int(-2)), (x(3), rat(1, 2))])
            + AffineExpr::constant(int(-3));
        assert_eq!(e.to_string(), "x1 - 2*x2 + 1/2*x3 - 3");
        assert_eq!((-AffineExpr::var(x(2))).to_string(), "-x2");
        assert_eq!(AffineExpr::zero().to_string(), "0");
    }

    #[test]
    fn substitution_and_eval() {
        // (x1 + 2 x2)[x2 := x1 - 1] = 3 x1 - 2
        let e = AffineExpr::linear([(x(1), int(1)), (x(2), int(2))]);
        let r = AffineExpr::var(x(1)) - AffineExpr::constant(int(1));
        let s = e.substitute(x(2), &r);
        assert_eq!(s, AffineExpr::term(x(1), int(3)) + AffineExpr::constant(int(-2)));
        let p = assignment(&[rat(1, 3)]);
        assert_eq!(s.eval(&p).unwrap(), int(-1));
        assert_eq!(
            e.eval(&p).unwrap_err(),
            Error::UnassignedVariable(x(2))
        );
    }

    #[test]
    fn primitive_factor_clears_linear_part() {
        let e = AffineExpr::linear([(x(1), rat(2, 3)), (x(2), rat(4, 9))]);
        let k = e.primitive_factor().unwrap();
        let s = e.scale(&k);
        assert_eq!(s.coeff(x(1)), int(3));
        assert_eq!(s.coeff(x(2)), int(2));
    }
}
