use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::atom::{Atom, Rel};
use super::expr::{AffineExpr, Assignment, Var};
use crate::error::Result;

/// Quantifier-free boolean combination of affine atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
}

impl From<Atom> for Formula {
    fn from(a: Atom) -> Self {
        Formula::atom(a)
    }
}

impl Formula {
    /// Wraps an atom, folding it away when it is variable-free.
    pub fn atom(a: Atom) -> Self {
        match a.constant_truth() {
            Some(true) => Formula::True,
            Some(false) => Formula::False,
            None => Formula::Atom(a),
        }
    }

    pub fn gt(e: AffineExpr) -> Self {
        Self::atom(Atom::gt(e))
    }

    pub fn ge(e: AffineExpr) -> Self {
        Self::atom(Atom::ge(e))
    }

    pub fn eq(e: AffineExpr) -> Self {
        Self::atom(Atom::eq(e))
    }

    /// `e ≠ 0`, encoded as `e > 0 ∨ −e > 0`.
    pub fn ne(e: AffineExpr) -> Self {
        Self::or([Self::gt(e.clone()), Self::gt(-e)])
    }

    /// Flattening conjunction with constant folding.
    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Flattening disjunction with constant folding.
    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    /// Raw negation node; see [`Formula::negate`] for the normalized form.
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Self::or([a.negate(), b])
    }

    /// Negation pushed down to the atoms (the result is in NNF).
    pub fn negate(&self) -> Formula {
        match self {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Atom(a) => Formula::or(a.negation().into_iter().map(Formula::atom)),
            Formula::And(parts) => Formula::or(parts.iter().map(Formula::negate)),
            Formula::Or(parts) => Formula::and(parts.iter().map(Formula::negate)),
            Formula::Not(inner) => inner.nnf(),
        }
    }

    /// Negation normal form: no `Not` nodes, constants folded.
    pub fn nnf(&self) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => self.clone(),
            Formula::And(parts) => Formula::and(parts.iter().map(Formula::nnf)),
            Formula::Or(parts) => Formula::or(parts.iter().map(Formula::nnf)),
            Formula::Not(inner) => inner.negate(),
        }
    }

    pub fn eval(&self, point: &Assignment) -> Result<bool> {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => a.eval(point)?,
            Formula::And(parts) => {
                // Evaluate every part so unassigned variables are always reported.
                let mut all = true;
                for p in parts {
                    all &= p.eval(point)?;
                }
                all
            }
            Formula::Or(parts) => {
                let mut any = false;
                for p in parts {
                    any |= p.eval(point)?;
                }
                any
            }
            Formula::Not(inner) => !inner.eval(point)?,
        })
    }

    /// Rebuilds the formula with every atom replaced by `f(atom)`.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Formula) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => f(a),
            Formula::And(parts) => Formula::and(parts.iter().map(|p| p.map_atoms(f))),
            Formula::Or(parts) => Formula::or(parts.iter().map(|p| p.map_atoms(f))),
            Formula::Not(inner) => Formula::not(inner.map_atoms(f)).nnf_if_constant(),
        }
    }

    fn nnf_if_constant(self) -> Formula {
        match &self {
            Formula::Not(inner) => match **inner {
                Formula::True => Formula::False,
                Formula::False => Formula::True,
                _ => self,
            },
            _ => self,
        }
    }

    pub fn substitute(&self, v: Var, e: &AffineExpr) -> Formula {
        self.map_atoms(&mut |a| Formula::atom(a.substitute(v, e)))
    }

    pub fn substitute_all(&self, map: &BTreeMap<Var, AffineExpr>) -> Formula {
        self.map_atoms(&mut |a| Formula::atom(a.substitute_all(map)))
    }

    /// Renames variables (a substitution by variables only).
    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Formula {
        let exprs = map
            .iter()
            .map(|(k, v)| (*k, AffineExpr::var(*v)))
            .collect();
        self.substitute_all(&exprs)
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.for_each_atom(&mut |a| a.expr().collect_vars(&mut out));
        out
    }

    pub fn for_each_atom(&self, f: &mut impl FnMut(&Atom)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => f(a),
            Formula::And(parts) | Formula::Or(parts) => {
                parts.iter().for_each(|p| p.for_each_atom(f))
            }
            Formula::Not(inner) => inner.for_each_atom(f),
        }
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.for_each_atom(&mut |a| out.push(a.clone()));
        out
    }

    pub fn atom_count(&self) -> usize {
        let mut n = 0;
        self.for_each_atom(&mut |_| n += 1);
        n
    }

    /// Replaces every constant `b` by `b·s`, for a fresh scalar variable `s`.
    ///
    /// For `s > 0` the result holds at `x` exactly when the original holds
    /// at `x / s`, which turns "closed under positive scaling" into a linear
    /// condition.
    pub fn scale_constants(&self, s: Var) -> Formula {
        self.map_atoms(&mut |a| {
            let e = a.expr();
            let mut scaled = e.linear_part();
            scaled.add_term(s, e.constant_term().clone());
            Formula::atom(Atom::new(scaled, a.rel()))
        })
    }

    pub fn is_atom_relation(&self, rel: Rel) -> bool {
        matches!(self, Formula::Atom(a) if a.rel() == rel)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_part(f: &mut fmt::Formatter<'_>, p: &Formula, parent_and: bool) -> fmt::Result {
            let needs_parens = match p {
                Formula::Or(_) => parent_and,
                Formula::And(_) => !parent_and,
                _ => false,
            };
            if needs_parens {
                write!(f, "({p})")
            } else {
                write!(f, "{p}")
            }
        }
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::And(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" and ")?;
                    }
                    write_part(f, p, true)?;
                }
                Ok(())
            }
            Formula::Or(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" or ")?;
                    }
                    write_part(f, p, false)?;
                }
                Ok(())
            }
            Formula::Not(inner) => match **inner {
                Formula::Atom(_) | Formula::True | Formula::False => write!(f, "not {inner}"),
                _ => write!(f, "not ({inner})"),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linarith::expr::assignment;
    use crate::linarith::rational::{int, rat};

    fn x(i: u32) -> AffineExpr {
        AffineExpr::var(Var(i - 1))
    }

    fn k2() -> Formula {
        Formula::or([
            Formula::gt(x(1)),
            Formula::and([Formula::eq(x(1)), Formula::ge(x(2))]),
        ])
    }

    #[test]
    fn eval_examples() {
        assert!(Formula::gt(x(1)).eval(&assignment(&[rat(1, 2)])).unwrap());
        let f = Formula::and([Formula::gt(x(1)), Formula::ge(x(2))]);
        assert!(!f.eval(&assignment(&[int(0), int(3)])).unwrap());
        assert!(!k2().eval(&assignment(&[int(0), int(-1)])).unwrap());
        assert!(k2().eval(&assignment(&[int(0), int(1)])).unwrap());
    }

    #[test]
    fn eval_reports_unassigned() {
        let err = k2().eval(&assignment(&[int(1)])).unwrap_err();
        assert_eq!(err, crate::Error::UnassignedVariable(Var(1)));
    }

    #[test]
    fn substitution_examples() {
        // x > 0 with x := y + 1
        let y = x(2);
        let f = Formula::gt(x(1)).substitute(Var(0), &(y + AffineExpr::constant(int(1))));
        assert_eq!(f.to_string(), "x2 + 1 > 0");
        // x = 0 with x := 0 folds to true
        let g = Formula::eq(x(1)).substitute(Var(0), &AffineExpr::zero());
        assert_eq!(g, Formula::True);
    }

    #[test]
    fn negation_is_nnf() {
        let n = Formula::not(Formula::gt(x(1))).nnf();
        assert_eq!(n.to_string(), "-x1 >= 0");
        let m = Formula::not(Formula::eq(x(1))).nnf();
        assert_eq!(m.to_string(), "x1 > 0 or -x1 > 0");
    }

    #[test]
    fn display_parenthesizes() {
        assert_eq!(k2().to_string(), "x1 > 0 or (x1 = 0 and x2 >= 0)");
    }

    #[test]
    fn scale_constants_tracks_dilation() {
        // {x1 >= 1} scaled: x1 - s >= 0, i.e. x/s in the set.
        let f = Formula::ge(x(1) - AffineExpr::constant(int(1)));
        let g = f.scale_constants(Var(5));
        assert_eq!(g.to_string(), "x1 - x6 >= 0");
    }
}
