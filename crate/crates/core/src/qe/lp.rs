//! Exact two-phase simplex (Bland's rule) used to decide feasibility of a
//! conjunction of strict and non-strict linear constraints.
//!
//! Strict rows `a·x + b > 0` are relaxed to `a·x + b − δ ≥ 0` with
//! `0 ≤ δ ≤ 1`; the cell is nonempty iff the relaxation is feasible and the
//! maximal `δ` is positive.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::linalg::rank_of;
use crate::linarith::{AffineExpr, Assignment, Cell, Rational, Rel, Var};

enum Outcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, point: Vec<Rational> },
}

/// maximize `c·z` subject to `A z ≤ b`, `z ≥ 0`.
fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Outcome {
    let m = a.len();
    let n = c.len();
    let art_rows: Vec<usize> = (0..m).filter(|&i| b[i].is_negative()).collect();
    // Columns: z (n), slacks (m), artificials (art_rows.len()), rhs.
    let n_art = art_rows.len();
    let width = n + m + n_art;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut basis = vec![0usize; m];
    for i in 0..m {
        let mut row = vec![Rational::zero(); width + 1];
        let flip = b[i].is_negative();
        for j in 0..n {
            row[j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = if flip { -Rational::one() } else { Rational::one() };
        row[width] = if flip { -b[i].clone() } else { b[i].clone() };
        if flip {
            let k = art_rows.iter().position(|&r| r == i).unwrap();
            row[n + m + k] = Rational::one();
            basis[i] = n + m + k;
        } else {
            basis[i] = n + i;
        }
        t.push(row);
    }

    let mut allowed = vec![true; width];
    if n_art > 0 {
        // Phase 1: minimize the sum of artificials.
        let mut obj = vec![Rational::zero(); width + 1];
        for k in 0..n_art {
            obj[n + m + k] = Rational::one();
        }
        for &i in &art_rows {
            for j in 0..=width {
                obj[j] -= &t[i][j];
            }
        }
        run(&mut t, &mut obj, &mut basis, &allowed);
        if !obj[width].is_zero() {
            return Outcome::Infeasible;
        }
        // Drive remaining artificials out of the basis.
        let mut i = 0;
        while i < t.len() {
            if basis[i] >= n + m {
                match (0..n + m).find(|&j| !t[i][j].is_zero()) {
                    Some(j) => {
                        pivot(&mut t, &mut obj, &mut basis, i, j);
                        i += 1;
                    }
                    None => {
                        t.remove(i);
                        basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        for flag in allowed.iter_mut().skip(n + m) {
            *flag = false;
        }
    }

    // Phase 2: minimize −c·z.
    let mut obj = vec![Rational::zero(); width + 1];
    for j in 0..n {
        obj[j] = -c[j].clone();
    }
    for i in 0..t.len() {
        let cb = obj[basis[i]].clone();
        if !cb.is_zero() {
            for j in 0..=width {
                obj[j] -= &cb * &t[i][j];
            }
        }
    }
    if !run(&mut t, &mut obj, &mut basis, &allowed) {
        return Outcome::Unbounded;
    }
    let mut point = vec![Rational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            point[bv] = t[i][width].clone();
        }
    }
    Outcome::Optimal {
        value: obj[width].clone(),
        point,
    }
}

fn pivot(
    t: &mut [Vec<Rational>],
    obj: &mut [Rational],
    basis: &mut [usize],
    r: usize,
    col: usize,
) {
    let inv = Rational::one() / &t[r][col];
    for x in t[r].iter_mut() {
        *x *= &inv;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && !row[col].is_zero() {
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }
    if !obj[col].is_zero() {
        let f = obj[col].clone();
        for (x, y) in obj.iter_mut().zip(&prow) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
    basis[r] = col;
}

/// Runs Bland's rule to optimality; `false` when unbounded.
fn run(
    t: &mut [Vec<Rational>],
    obj: &mut [Rational],
    basis: &mut [usize],
    allowed: &[bool],
) -> bool {
    let width = allowed.len();
    loop {
        let Some(col) = (0..width).find(|&j| allowed[j] && obj[j].is_negative()) else {
            return true;
        };
        let mut best: Option<(usize, Rational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[col].is_positive() {
                let ratio = &row[width] / &row[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && basis[i] < basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        match best {
            None => return false,
            Some((r, _)) => pivot(t, obj, basis, r, col),
        }
    }
}

/// Linear forms of the cell are independent: every combination of nonempty
/// per-form intervals is attained, so the (already interval-consistent)
/// cell is nonempty.
fn forms_independent(cell: &Cell, vars: &BTreeMap<Var, usize>) -> bool {
    // Parallel atoms share a form once scaled to a unit leading coefficient.
    let mut forms: Vec<AffineExpr> = cell
        .atoms()
        .iter()
        .map(|a| {
            let lin = a.expr().linear_part();
            let lead = lin.leading().map(|(_, c)| c.clone()).unwrap();
            lin.scale(&(Rational::one() / lead))
        })
        .collect();
    forms.sort();
    forms.dedup();
    let rows: Vec<Vec<Rational>> = forms
        .iter()
        .map(|f| {
            let mut row = vec![Rational::zero(); vars.len()];
            for (v, c) in f.coeffs() {
                row[vars[v]] = c.clone();
            }
            row
        })
        .collect();
    rank_of(&rows, vars.len()) == rows.len()
}

/// A point of the cell, or `None` when the cell is empty.
pub(crate) fn cell_point(cell: &Cell) -> Option<Assignment> {
    let vars: BTreeMap<Var, usize> = cell
        .atoms()
        .iter()
        .flat_map(|a| a.expr().vars().collect::<Vec<_>>())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let k = vars.len();
    let has_strict = cell.atoms().iter().any(|a| a.rel() == Rel::Gt);
    let n = 2 * k + usize::from(has_strict);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut push = |coef: &AffineExpr, sign: &Rational, delta: bool, b: Rational| {
        // −sign·(a·x) + δ ≤ sign·b   encodes   sign·(a·x + b) − δ ≥ 0
        let mut row = vec![Rational::zero(); n];
        for (v, c) in coef.coeffs() {
            let i = vars[v];
            let s = -(c * sign);
            row[2 * i] = s.clone();
            row[2 * i + 1] = -s;
        }
        if delta {
            row[2 * k] = Rational::one();
        }
        rows.push(row);
        rhs.push(b);
    };
    for a in cell.atoms() {
        let e = a.expr();
        let b = e.constant_term().clone();
        match a.rel() {
            Rel::Ge => push(e, &Rational::one(), false, b),
            Rel::Gt => push(e, &Rational::one(), true, b),
            Rel::Eq => {
                push(e, &Rational::one(), false, b.clone());
                push(e, &-Rational::one(), false, -b);
            }
        }
    }
    let mut objective = vec![Rational::zero(); n];
    if has_strict {
        let mut row = vec![Rational::zero(); n];
        row[2 * k] = Rational::one();
        rows.push(row);
        rhs.push(Rational::one());
        objective[2 * k] = Rational::one();
    }
    match maximize(&rows, &rhs, &objective) {
        Outcome::Infeasible | Outcome::Unbounded => None,
        Outcome::Optimal { value, point } => {
            if has_strict && !value.is_positive() {
                return None;
            }
            Some(
                vars.iter()
                    .map(|(v, &i)| (*v, &point[2 * i] - &point[2 * i + 1]))
                    .collect(),
            )
        }
    }
}

/// Exact nonemptiness test for a cell.
pub(crate) fn cell_feasible(cell: &Cell) -> bool {
    if cell.is_empty() {
        return true;
    }
    let vars: BTreeMap<Var, usize> = cell
        .atoms()
        .iter()
        .flat_map(|a| a.expr().vars().collect::<Vec<_>>())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    if forms_independent(cell, &vars) {
        return true;
    }
    cell_point(cell).is_some()
}
