//! Bounded search for order isomorphisms between small spaces. A failed
//! search proves nothing.

use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::{rank_of, Matrix};
use crate::linarith::{Formula, Rational};
use crate::ovskit::{encode, LinearMap, OVSpace, SemilinearSet};
use crate::qe;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoSearch {
    /// `T(A₊) = B₊`.
    Found(LinearMap),
    /// No candidate worked; the spaces may still be isomorphic.
    NotFound,
}

impl IsoSearch {
    pub fn found(&self) -> bool {
        matches!(self, IsoSearch::Found(_))
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn signed_permutations(n: usize) -> Vec<Matrix> {
    let mut out = Vec::new();
    for p in permutations(n) {
        for signs in 0..(1u32 << n) {
            let mut m = Matrix::zeros(n, n);
            for (i, &j) in p.iter().enumerate() {
                let s = if signs >> i & 1 == 1 { -Rational::one() } else { Rational::one() };
                m.set(i, j, s);
            }
            out.push(m);
        }
    }
    out
}

fn small_integer_matrices(n: usize) -> Vec<Matrix> {
    let cells = n * n;
    let mut out = Vec::new();
    for code in 0..3usize.pow(cells as u32) {
        let mut m = Matrix::zeros(n, n);
        let mut c = code;
        for k in 0..cells {
            let v = (c % 3) as i64 - 1;
            c /= 3;
            m.set(k / n, k % n, Rational::from_integer(v.into()));
        }
        if m.rank() == n {
            out.push(m);
        }
    }
    out
}

/// Sample points of the cells of a set, plus their sums.
fn sample_points(s: &SemilinearSet, b: &qe::Budget) -> Result<Vec<Vec<Rational>>> {
    let coords = SemilinearSet::coords(s.dim());
    let mut pts = Vec::new();
    for cell in qe::feasible_cells(s.formula(), b)?.cells {
        if let Some(p) = qe::find_point(&cell.to_formula(), &coords, b)? {
            pts.push(encode::read(&p, &coords));
        }
    }
    Ok(pts)
}

/// Matrices sending an independent set of sample points of `A` to
/// sample points of `B`.
fn witness_matrices(a: &[Vec<Rational>], b: &[Vec<Rational>], n: usize) -> Vec<Matrix> {
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    for p in a {
        let mut t = basis.clone();
        t.push(p.clone());
        if rank_of(&t, n) == t.len() {
            basis = t;
        }
    }
    if basis.len() != n || n == 0 {
        return Vec::new();
    }
    let Ok(ma_inv) = Matrix::from_columns(&basis, n).and_then(|m| m.inverse()) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let idx: Vec<usize> = (0..b.len()).collect();
    let mut choose = vec![0usize; n];
    fn rec(
        k: usize,
        idx: &[usize],
        choose: &mut Vec<usize>,
        b: &[Vec<Rational>],
        ma_inv: &Matrix,
        out: &mut Vec<Matrix>,
    ) {
        if out.len() >= 256 {
            return;
        }
        let n = choose.len();
        if k == n {
            let cols: Vec<Vec<Rational>> = choose.iter().map(|&i| b[i].clone()).collect();
            if let Ok(mb) = Matrix::from_columns(&cols, n) {
                if mb.rank() == n {
                    if let Ok(t) = mb.mul(ma_inv) {
                        out.push(t);
                    }
                }
            }
            return;
        }
        for &i in idx {
            choose[k] = i;
            rec(k + 1, idx, choose, b, ma_inv, out);
        }
    }
    rec(0, &idx, &mut choose, b, &ma_inv, &mut out);
    out
}

fn maps_into(t: &Matrix, a: &SemilinearSet, b: &SemilinearSet, budget: &qe::Budget) -> Result<bool> {
    let coords = SemilinearSet::coords(a.dim());
    let x = encode::exprs(&coords);
    let image = LinearMap::new(t.clone()).apply_exprs(&x);
    qe::valid(&Formula::implies(a.at(&x), b.at(&image)), budget)
}

/// Searches signed permutations, small integer matrices (dimension ≤ 2)
/// and matrices matching sample points, for `T` with `T(A₊) = B₊`.
pub fn order_isomorphic(a: &OVSpace, b: &OVSpace) -> Result<IsoSearch> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let n = a.dim();
    let max = a.settings().iso_dim_max;
    if n > max {
        return Err(Error::DimensionTooLarge { dim: n, max });
    }
    if a.is_generating()? != b.is_generating()? || a.is_cone()? != b.is_cone()? {
        return Ok(IsoSearch::NotFound);
    }
    let budget = a.budget();
    let pa = sample_points(a.positive(), budget)?;
    let pb = sample_points(b.positive(), budget)?;
    let mut candidates = signed_permutations(n);
    if n <= 2 {
        candidates.extend(small_integer_matrices(n));
    }
    candidates.extend(witness_matrices(&pa, &pb, n));
    for t in candidates {
        // Cheap rejection on sample points before any decision.
        let quick = pa.iter().all(|p| {
            t.apply(p)
                .ok()
                .and_then(|q| b.contains(&q).ok())
                .unwrap_or(false)
        });
        if !quick {
            continue;
        }
        let Ok(inv) = t.inverse() else { continue };
        if maps_into(&t, a.positive(), b.positive(), budget)?
            && maps_into(&inv, b.positive(), a.positive(), budget)?
        {
            return Ok(IsoSearch::Found(LinearMap::new(t)));
        }
    }
    Ok(IsoSearch::NotFound)
}
