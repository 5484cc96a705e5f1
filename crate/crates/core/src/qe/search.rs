//! Depth-first enumeration of the nonempty cells of a formula, with exact
//! feasibility pruning, and quantifier elimination built on top of it.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use super::{fm, lp, Budget};
use crate::error::{BudgetKind, Error, Result};
use crate::linarith::{dnf_cells, Assignment, Cell, Dnf, Formula, Rational, Var};

/// Walks the disjunctive expansion of `stack` under the context cell,
/// skipping every branch whose partial conjunction is already empty.
struct Walker<'b> {
    budget: &'b Budget,
    visited: usize,
}

impl Walker<'_> {
    fn tick(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget.max_cells {
            return Err(Error::BudgetExceeded {
                kind: BudgetKind::Cells,
                limit: self.budget.max_cells,
            });
        }
        Ok(())
    }

    fn walk(
        &mut self,
        stack: &mut Vec<Formula>,
        ctx: Cell,
        emit: &mut dyn FnMut(Cell) -> Result<ControlFlow<()>>,
    ) -> Result<ControlFlow<()>> {
        let Some(goal) = stack.pop() else {
            self.tick()?;
            return emit(ctx);
        };
        let out = match &goal {
            Formula::True => self.walk(stack, ctx, emit),
            Formula::False => Ok(ControlFlow::Continue(())),
            Formula::Atom(a) => match ctx.with_atom(a.clone()) {
                None => Ok(ControlFlow::Continue(())),
                Some(next) => {
                    if next != ctx && !lp::cell_feasible(&next) {
                        Ok(ControlFlow::Continue(()))
                    } else {
                        self.walk(stack, next, emit)
                    }
                }
            },
            Formula::And(parts) => {
                let depth = stack.len();
                stack.extend(parts.iter().rev().cloned());
                let r = self.walk(stack, ctx, emit);
                stack.truncate(depth);
                r
            }
            Formula::Or(parts) => {
                // A disjunct that already holds on the whole context makes
                // the other branches redundant.
                let implied = parts.iter().find(|p| implied_by(&ctx, p));
                let parts = match implied {
                    Some(p) => std::slice::from_ref(p),
                    None => &parts[..],
                };
                let mut r = Ok(ControlFlow::Continue(()));
                for p in parts {
                    stack.push(p.clone());
                    r = self.walk(stack, ctx.clone(), emit);
                    stack.pop();
                    if !matches!(r, Ok(ControlFlow::Continue(()))) {
                        break;
                    }
                }
                r
            }
            Formula::Not(inner) => {
                stack.push(inner.negate());
                let r = self.walk(stack, ctx, emit);
                stack.pop();
                r
            }
        };
        stack.push(goal);
        out
    }
}

/// Whether every point of `ctx` satisfies `f`, for atoms and conjunctions
/// of atoms; `false` when unknown.
fn implied_by(ctx: &Cell, f: &Formula) -> bool {
    match f {
        Formula::True => true,
        Formula::Atom(a) => a
            .negation()
            .into_iter()
            .all(|n| ctx.with_atom(n).is_none_or(|c| !lp::cell_feasible(&c))),
        Formula::And(parts) => parts.iter().all(|p| matches!(p, Formula::Atom(_)) && implied_by(ctx, p)),
        _ => false,
    }
}

/// Calls `emit` on the nonempty cells of `f` in a deterministic order.
fn for_each_cell(
    f: &Formula,
    budget: &Budget,
    emit: &mut dyn FnMut(Cell) -> Result<ControlFlow<()>>,
) -> Result<()> {
    let mut w = Walker { budget, visited: 0 };
    let mut stack = vec![f.nnf()];
    let _ = w.walk(&mut stack, Cell::top(), emit)?;
    Ok(())
}

/// Nonempty cells of `f` (exact: infeasible cells are dropped).
pub fn feasible_cells(f: &Formula, budget: &Budget) -> Result<Dnf> {
    let mut cells = Vec::new();
    for_each_cell(f, budget, &mut |c| {
        cells.push(c);
        Ok(ControlFlow::Continue(()))
    })?;
    let mut d = Dnf { cells };
    d.tidy();
    Ok(d)
}

fn first_cell(f: &Formula, budget: &Budget) -> Result<Option<Cell>> {
    let mut found = None;
    for_each_cell(f, budget, &mut |c| {
        found = Some(c);
        Ok(ControlFlow::Break(()))
    })?;
    Ok(found)
}

/// Splits a conjunction into groups that share no variable from `scope`,
/// plus the conjuncts that mention none of them.
fn components(parts: &[Formula], scope: &BTreeSet<Var>) -> (Vec<Formula>, Vec<Vec<Formula>>) {
    let mut outside = Vec::new();
    let mut groups: Vec<(BTreeSet<Var>, Vec<Formula>)> = Vec::new();
    for p in parts {
        let vs: BTreeSet<Var> = p.free_vars().intersection(scope).copied().collect();
        if vs.is_empty() {
            outside.push(p.clone());
            continue;
        }
        let mut merged = (vs, vec![p.clone()]);
        let mut i = 0;
        while i < groups.len() {
            if groups[i].0.is_disjoint(&merged.0) {
                i += 1;
            } else {
                let (gv, gp) = groups.remove(i);
                merged.0.extend(gv);
                let mut ps = gp;
                ps.extend(merged.1);
                merged.1 = ps;
            }
        }
        groups.push(merged);
    }
    groups.sort_by(|a, b| a.0.cmp(&b.0));
    (outside, groups.into_iter().map(|g| g.1).collect())
}

fn conjuncts(f: &Formula) -> Vec<Formula> {
    match f {
        Formula::And(parts) => parts.clone(),
        other => vec![other.clone()],
    }
}

/// Whether some rational point satisfies `f`.
pub fn satisfiable(f: &Formula, budget: &Budget) -> Result<bool> {
    let f = f.nnf();
    let all = f.free_vars();
    let (outside, groups) = components(&conjuncts(&f), &all);
    for g in outside.into_iter().map(|p| vec![p]).chain(groups) {
        if first_cell(&Formula::and(g), budget)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A canonical satisfying point for `f`, assigning every variable of
/// `order` (unconstrained ones get 0) and every free variable of `f`.
pub fn find_point(f: &Formula, order: &[Var], budget: &Budget) -> Result<Option<Assignment>> {
    let f = f.nnf();
    let mut vars: Vec<Var> = order.to_vec();
    for v in f.free_vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    let all: BTreeSet<Var> = vars.iter().copied().collect();
    let (outside, groups) = components(&conjuncts(&f), &all);
    let mut point: Assignment = vars.iter().map(|v| (*v, Rational::default())).collect();
    for g in outside.into_iter().map(|p| vec![p]).chain(groups) {
        let Some(cell) = first_cell(&Formula::and(g), budget)? else {
            return Ok(None);
        };
        let local: Vec<Var> = vars.iter().copied().filter(|v| cell.mentions(*v)).collect();
        let Some(p) = fm::sample_point(&cell, &local, budget)? else {
            return Err(Error::InternalInvariantViolation(
                "feasible cell without a sample point".into(),
            ));
        };
        point.extend(p);
    }
    Ok(Some(point))
}

/// `∃ vars. cell-wise`: FM projection of every nonempty cell.
fn project_block(f: &Formula, vars: &BTreeSet<Var>, budget: &Budget) -> Result<Formula> {
    let mut out: Vec<Cell> = Vec::new();
    let mut err = None;
    for_each_cell(f, budget, &mut |c| {
        match fm::eliminate(&c, vars, budget) {
            Ok(Some(p)) => {
                let top = p.is_empty();
                out.push(p);
                if top {
                    return Ok(ControlFlow::Break(()));
                }
            }
            Ok(None) => {}
            Err(e) => {
                err = Some(e);
                return Ok(ControlFlow::Break(()));
            }
        }
        if out.len() > budget.max_cells {
            return Err(Error::BudgetExceeded {
                kind: BudgetKind::Cells,
                limit: budget.max_cells,
            });
        }
        Ok(ControlFlow::Continue(()))
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let mut d = Dnf { cells: out };
    if d.cells.len() <= 64 {
        d.merge_cells();
    } else {
        d.tidy();
    }
    Ok(d.to_formula())
}

fn exists_nnf(f: &Formula, vars: &BTreeSet<Var>, budget: &Budget) -> Result<Formula> {
    let scope: BTreeSet<Var> = f.free_vars().intersection(vars).copied().collect();
    if scope.is_empty() {
        return Ok(f.clone());
    }
    match f {
        Formula::Or(parts) => {
            let mut out = Vec::with_capacity(parts.len());
            for p in parts {
                let q = exists_nnf(p, &scope, budget)?;
                if q == Formula::True {
                    return Ok(Formula::True);
                }
                out.push(q);
            }
            Ok(Formula::or(out))
        }
        Formula::And(parts) => {
            let (outside, groups) = components(parts, &scope);
            let mut out = outside;
            if groups.len() == 1 && groups[0].len() == parts.len() - out.len() && out.is_empty() {
                return project_block(f, &scope, budget);
            }
            for g in groups {
                let q = if g.len() == 1 {
                    exists_nnf(&g[0], &scope, budget)?
                } else {
                    let gf = Formula::and(g);
                    let gs: BTreeSet<Var> = gf.free_vars().intersection(&scope).copied().collect();
                    project_block(&gf, &gs, budget)?
                };
                if q == Formula::False {
                    return Ok(Formula::False);
                }
                out.push(q);
            }
            Ok(Formula::and(out))
        }
        _ => project_block(f, &scope, budget),
    }
}

/// A quantifier-free formula equivalent to `∃ vars. f`.
pub fn eliminate_exists(f: &Formula, vars: &BTreeSet<Var>, budget: &Budget) -> Result<Formula> {
    let g = exists_nnf(&f.nnf(), vars, budget)?;
    Ok(tidy_small(g))
}

/// Fuses cells of a small result; large results are returned unchanged.
fn tidy_small(f: Formula) -> Formula {
    match dnf_cells(&f, 256) {
        Ok(mut d) if d.cells.len() <= 64 => {
            d.merge_cells();
            d.to_formula()
        }
        _ => f,
    }
}

/// A quantifier-free formula equivalent to `∀ vars. f`.
pub fn eliminate_forall(f: &Formula, vars: &BTreeSet<Var>, budget: &Budget) -> Result<Formula> {
    Ok(eliminate_exists(&f.negate(), vars, budget)?.negate())
}

/// Whether `f` and `g` agree at every rational point.
pub fn equivalent(f: &Formula, g: &Formula, budget: &Budget) -> Result<bool> {
    Ok(!satisfiable(&Formula::and([f.clone(), g.negate()]), budget)?
        && !satisfiable(&Formula::and([g.clone(), f.negate()]), budget)?)
}

/// Whether `f` holds at every rational point.
pub fn valid(f: &Formula, budget: &Budget) -> Result<bool> {
    Ok(!satisfiable(&f.negate(), budget)?)
}

/// Canonical printing form: nonempty cells, tidied and fused.
pub fn simplify(f: &Formula, budget: &Budget) -> Result<Formula> {
    let mut d = feasible_cells(f, budget)?;
    d.merge_cells();
    Ok(d.to_formula())
}

/// Renames `vars` to fresh variables above every variable in `avoid`.
pub fn fresh_vars(count: usize, avoid: &BTreeSet<Var>) -> Vec<Var> {
    let start = avoid.iter().next_back().map(|v| v.0 + 1).unwrap_or(0);
    (0..count as u32).map(|i| Var(start + i)).collect()
}

/// `{v ↦ w}` as a variable map.
pub fn rename_map(from: &[Var], to: &[Var]) -> BTreeMap<Var, Var> {
    from.iter().copied().zip(to.iter().copied()).collect()
}
