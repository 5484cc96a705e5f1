//! Helpers shared by the integration suites: the corpus list, an
//! independent evaluator and an elimination oracle that never calls the
//! engine.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use ovskit::corpus::{self, CorpusEntry};
use ovskit::linarith::{int, rat, AffineExpr, Assignment, Formula, Rational, Rel, Var};
use rand::Rng;

/// Standard cones plus the non-cone wedges.
pub fn all_spaces() -> Vec<CorpusEntry> {
    let mut v = corpus::standard();
    v.extend(corpus::wedges());
    v
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&c| int(c)).collect()
}

pub fn affine_value(e: &AffineExpr, p: &Assignment) -> Rational {
    let mut acc = e.constant_term().clone();
    for (v, c) in e.coeffs() {
        acc += c * p.get(v).expect("point covers the variables");
    }
    acc
}

/// Evaluates a formula by structural recursion, independently of
/// `Formula::eval`.
pub fn truth(f: &Formula, p: &Assignment) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => {
            let v = affine_value(a.expr(), p);
            match a.rel() {
                Rel::Gt => v.is_positive(),
                Rel::Ge => !v.is_negative(),
                Rel::Eq => v.is_zero(),
            }
        }
        Formula::And(ps) => ps.iter().all(|q| truth(q, p)),
        Formula::Or(ps) => ps.iter().any(|q| truth(q, p)),
        Formula::Not(q) => !truth(q, p),
    }
}

fn collect_atoms(f: &Formula, out: &mut Vec<(AffineExpr, Rel)>) {
    match f {
        Formula::Atom(a) => out.push((a.expr().clone(), a.rel())),
        Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|q| collect_atoms(q, out)),
        Formula::Not(q) => collect_atoms(q, out),
        _ => {}
    }
}

/// Points of a line splitting it into sign-invariant pieces for the
/// given roots: the roots, midpoints, and one point beyond each end.
fn sample_line(mut roots: Vec<Rational>) -> Vec<Rational> {
    roots.sort();
    roots.dedup();
    if roots.is_empty() {
        return vec![Rational::zero()];
    }
    let mut out = vec![&roots[0] - Rational::one()];
    for w in roots.windows(2) {
        out.push(w[0].clone());
        out.push((&w[0] + &w[1]) / int(2));
    }
    out.push(roots.last().unwrap().clone());
    out.push(roots.last().unwrap() + Rational::one());
    out
}

/// `a·y + c` for an affine expression with the point substituted.
fn reduce1(e: &AffineExpr, p: &Assignment, y: Var) -> (Rational, Rational) {
    let mut c = e.constant_term().clone();
    let mut a = Rational::zero();
    for (v, k) in e.coeffs() {
        if *v == y {
            a += k;
        } else {
            c += k * &p[v];
        }
    }
    (a, c)
}

/// Decides `∃y f(p, y)` by evaluating at the critical points of `y`.
pub fn exists_one(f: &Formula, p: &Assignment, y: Var) -> bool {
    let mut atoms = Vec::new();
    collect_atoms(f, &mut atoms);
    let roots = atoms
        .iter()
        .filter_map(|(e, _)| {
            let (a, c) = reduce1(e, p, y);
            (!a.is_zero()).then(|| -c / a)
        })
        .collect();
    sample_line(roots).into_iter().any(|t| {
        let mut q = p.clone();
        q.insert(y, t);
        truth(f, &q)
    })
}

/// Decides `∃y₁ ∃y₂ f(p, y₁, y₂)` by a cylindrical sweep over `y₁`.
pub fn exists_two(f: &Formula, p: &Assignment, y1: Var, y2: Var) -> bool {
    let mut atoms = Vec::new();
    collect_atoms(f, &mut atoms);
    // a·y1 + b·y2 + c
    let lines: Vec<(Rational, Rational, Rational)> = atoms
        .iter()
        .map(|(e, _)| {
            let mut c = e.constant_term().clone();
            let (mut a, mut b) = (Rational::zero(), Rational::zero());
            for (v, k) in e.coeffs() {
                if *v == y1 {
                    a += k;
                } else if *v == y2 {
                    b += k;
                } else {
                    c += k * &p[v];
                }
            }
            (a, b, c)
        })
        .collect();
    let mut crit = Vec::new();
    for (i, (a, b, c)) in lines.iter().enumerate() {
        if b.is_zero() && !a.is_zero() {
            crit.push(-c / a);
        }
        for (a2, b2, c2) in &lines[i + 1..] {
            let det = a * b2 - a2 * b;
            if !b.is_zero() && !b2.is_zero() && !det.is_zero() {
                // Eliminate y2 between the two lines.
                crit.push((c2 * b - c * b2) / det);
            }
        }
    }
    sample_line(crit).into_iter().any(|t| {
        let mut q = p.clone();
        q.insert(y1, t);
        exists_one(f, &q, y2)
    })
}

pub fn random_atom(rng: &mut impl Rng, vars: usize) -> Formula {
    let mut e = AffineExpr::constant(int(rng.gen_range(-3..=3)));
    for i in 0..vars {
        if rng.gen_bool(0.6) {
            e.add_term(Var(i as u32), int(rng.gen_range(-3..=3)));
        }
    }
    match rng.gen_range(0..4) {
        0 => Formula::gt(e),
        1 => Formula::ge(e),
        2 => Formula::eq(e),
        _ => Formula::ne(e),
    }
}

/// A random formula over `vars` variables with at most `max_atoms` atoms.
pub fn random_formula(rng: &mut impl Rng, vars: usize, max_atoms: usize) -> Formula {
    if max_atoms <= 1 || rng.gen_bool(0.25) {
        return random_atom(rng, vars);
    }
    let left = rng.gen_range(1..max_atoms);
    let a = random_formula(rng, vars, left);
    let b = random_formula(rng, vars, max_atoms - left);
    match rng.gen_range(0..5) {
        0 | 1 => Formula::and([a, b]),
        2 | 3 => Formula::or([a, b]),
        _ => Formula::not(Formula::and([a, b])),
    }
}

/// Coordinate values for grids: integers and the halves and thirds
/// between them, so that atom boundaries are hit and straddled.
pub fn grid_values(count: usize) -> Vec<Rational> {
    let mut v: Vec<Rational> = Vec::new();
    let mut k = 0i64;
    while v.len() < count {
        for q in [rat(k, 1), rat(-k, 1), rat(2 * k + 1, 2), rat(-(2 * k + 1), 2), rat(k * 3 + 1, 3)] {
            if !v.contains(&q) && v.len() < count {
                v.push(q);
            }
        }
        k += 1;
    }
    v
}

/// All points of `values^vars.len()`, assigned to `vars`.
pub fn grid(vars: &[Var], values: &[Rational]) -> Vec<Assignment> {
    let mut out = vec![Assignment::new()];
    for v in vars {
        let mut next = Vec::with_capacity(out.len() * values.len());
        for p in &out {
            for c in values {
                let mut q = p.clone();
                q.insert(*v, c.clone());
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// `x − t·y` as a point.
pub fn combine(x: &[Rational], t: &Rational, y: &[Rational]) -> Vec<Rational> {
    x.iter().zip(y).map(|(a, b)| a - t * b).collect()
}

pub fn negated(v: &[Rational]) -> Vec<Rational> {
    v.iter().map(|c| -c).collect()
}

pub fn vars_of(f: &Formula) -> BTreeSet<Var> {
    f.free_vars()
}

/// Row-major product, written out so that checks do not rely on the
/// library's matrix code.
pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>], inner: usize, cols: usize) -> Vec<Vec<Rational>> {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Rational::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Rank by plain Gaussian elimination.
pub fn rank(rows: &[Vec<Rational>], cols: usize) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}
