//! Fourier–Motzkin projection of a single cell.
//!
//! Equalities are used first (Gaussian substitution); the remaining
//! variables are eliminated in order of fewest generated combinations.
//! Combining a strict bound with anything yields a strict bound.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use super::lp;
use super::Budget;
use crate::error::{BudgetKind, Error, Result};
use crate::linarith::{AffineExpr, Assignment, Atom, Cell, Rational, Rel, Var};

fn over_budget(cell: &Cell, budget: &Budget) -> Result<()> {
    if cell.len() > budget.max_atoms {
        Err(Error::BudgetExceeded {
            kind: BudgetKind::Atoms,
            limit: budget.max_atoms,
        })
    } else {
        Ok(())
    }
}

/// Removes atoms implied by the rest of the cell (exact, via LP).
pub(crate) fn drop_redundant(cell: Cell) -> Cell {
    let mut atoms: Vec<Atom> = cell.atoms().to_vec();
    let mut i = 0;
    while i < atoms.len() {
        if atoms[i].rel() == Rel::Eq {
            i += 1;
            continue;
        }
        let negated = atoms[i].negation().pop().unwrap();
        let others = atoms
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, a)| a.clone())
            .chain(std::iter::once(negated));
        let implied = match Cell::new(others) {
            None => true,
            Some(c) => !lp::cell_feasible(&c),
        };
        if implied {
            atoms.remove(i);
        } else {
            i += 1;
        }
    }
    Cell::new(atoms).expect("subset of a consistent cell")
}

/// Eliminates one variable that occurs in no equality.
fn eliminate_inequalities(cell: &Cell, v: Var) -> Option<Cell> {
    let mut lowers = Vec::new();
    let mut uppers = Vec::new();
    let mut rest = Vec::new();
    for a in cell.atoms() {
        let c = a.expr().coeff(v);
        if c.is_zero() {
            rest.push(a.clone());
        } else if c.is_positive() {
            lowers.push((a, c));
        } else {
            uppers.push((a, c));
        }
    }
    for (lo, cl) in &lowers {
        for (up, cu) in &uppers {
            // |cu|·lo + cl·up cancels v.
            let e = lo.expr().scale(&cu.abs()) + up.expr().scale(cl);
            let rel = if lo.rel() == Rel::Gt || up.rel() == Rel::Gt {
                Rel::Gt
            } else {
                Rel::Ge
            };
            rest.push(Atom::new(e, rel));
        }
    }
    Cell::new(rest)
}

/// Solves the equality `a` for `v` and substitutes everywhere.
fn eliminate_by_equality(cell: &Cell, eq: &Atom, v: Var) -> Option<Cell> {
    let c = eq.expr().coeff(v);
    // c·v + r = 0  ⇒  v = −r / c
    let mut r = eq.expr().clone();
    r.add_term(v, -c.clone());
    let value = r.scale(&(-Rational::one() / c));
    Cell::new(
        cell.atoms()
            .iter()
            .filter(|a| *a != eq)
            .map(|a| a.substitute(v, &value)),
    )
}

/// `∃ vars. cell` as a cell over the remaining variables; `None` if the
/// projection is syntactically empty.
pub fn eliminate(cell: &Cell, vars: &BTreeSet<Var>, budget: &Budget) -> Result<Option<Cell>> {
    let mut cur = cell.clone();
    loop {
        over_budget(&cur, budget)?;
        let present: Vec<Var> = vars.iter().copied().filter(|v| cur.mentions(*v)).collect();
        if present.is_empty() {
            return Ok(Some(cur));
        }
        // Equalities first; prefer the shortest one.
        let eq = cur
            .atoms()
            .iter()
            .filter(|a| a.rel() == Rel::Eq)
            .filter_map(|a| {
                let v = a.expr().vars().find(|v| vars.contains(v))?;
                Some((a.expr().coeffs().len(), a.clone(), v))
            })
            .min_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
        let next = if let Some((_, eq, v)) = eq {
            eliminate_by_equality(&cur, &eq, v)
        } else {
            let v = present
                .iter()
                .copied()
                .min_by_key(|v| {
                    let (mut l, mut u) = (0usize, 0usize);
                    for a in cur.atoms() {
                        let c = a.expr().coeff(*v);
                        if c.is_positive() {
                            l += 1;
                        } else if c.is_negative() {
                            u += 1;
                        }
                    }
                    // Net growth in atom count.
                    (l * u) as isize - (l + u) as isize
                })
                .unwrap();
            eliminate_inequalities(&cur, v)
        };
        match next {
            None => return Ok(None),
            Some(c) => {
                cur = if budget.semantic_pruning && c.len() > budget.prune_threshold {
                    if !lp::cell_feasible(&c) {
                        return Ok(None);
                    }
                    drop_redundant(c)
                } else {
                    c
                };
            }
        }
    }
}

/// The canonical value for a variable constrained only by `cell`:
/// the fixed value of an equality, the midpoint of the tightest two-sided
/// bounds, one past a one-sided bound, or 0 when unconstrained.
fn choose_value(cell: &Cell, v: Var) -> Option<Rational> {
    let mut lo: Option<(Rational, bool)> = None;
    let mut hi: Option<(Rational, bool)> = None;
    for a in cell.atoms() {
        let c = a.expr().coeff(v);
        if c.is_zero() {
            continue;
        }
        // c·v + b ▷ 0  ⇒  v ▷ −b/c  (or ◁ when c < 0)
        let bound = -(a.expr().constant_term() / &c);
        let strict = a.rel() == Rel::Gt;
        match a.rel() {
            Rel::Eq => return Some(bound),
            _ if c.is_positive() => {
                if lo
                    .as_ref()
                    .is_none_or(|(x, s)| bound > *x || (bound == *x && strict && !s))
                {
                    lo = Some((bound, strict));
                }
            }
            _ => {
                if hi
                    .as_ref()
                    .is_none_or(|(x, s)| bound < *x || (bound == *x && strict && !s))
                {
                    hi = Some((bound, strict));
                }
            }
        }
    }
    match (lo, hi) {
        (Some((l, ls)), Some((h, hs))) => {
            if l > h || (l == h && (ls || hs)) {
                None
            } else {
                Some((l + h) / Rational::from_integer(2.into()))
            }
        }
        (Some((l, _)), None) => Some(l + Rational::one()),
        (None, Some((h, _))) => Some(h - Rational::one()),
        (None, None) => Some(Rational::zero()),
    }
}

/// A canonical point of `cell`, assigning `order` front to back by
/// back-substitution through projections. Variables of the cell outside
/// `order` must not occur.
pub fn sample_point(cell: &Cell, order: &[Var], budget: &Budget) -> Result<Option<Assignment>> {
    let mut cur = cell.clone();
    let mut point = Assignment::new();
    for (i, &v) in order.iter().enumerate() {
        let later: BTreeSet<Var> = order[i + 1..].iter().copied().collect();
        let Some(shadow) = eliminate(&cur, &later, budget)? else {
            return Ok(None);
        };
        let Some(value) = choose_value(&shadow, v) else {
            return Ok(None);
        };
        let e = AffineExpr::constant(value.clone());
        let Some(next) = Cell::new(cur.atoms().iter().map(|a| a.substitute(v, &e))) else {
            return Ok(None);
        };
        cur = next;
        point.insert(v, value);
    }
    if !cur.is_empty() {
        return Ok(None);
    }
    Ok(Some(point))
}
