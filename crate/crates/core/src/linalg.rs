//! Dense matrices over exact rationals: reduced row echelon form, rank,
//! null spaces and products.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linarith::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Rational>>,
}

/// Output of [`Matrix::rref`].
#[derive(Debug, Clone)]
pub struct Echelon {
    /// Nonzero rows of the reduced row echelon form.
    pub rows: Vec<Vec<Rational>>,
    /// Pivot column of each row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![Rational::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Rational::one();
        }
        m
    }

    /// Builds a `rows × cols` matrix; every row must have `cols` entries.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    /// The matrix whose columns are the given vectors of length `dim`.
    pub fn from_columns(columns: &[Vec<Rational>], dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: c.len(),
                });
            }
            for (i, x) in c.iter().enumerate() {
                m.data[i][j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        Matrix::from_rows(data, cols).expect("ragged literal matrix")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    if !rhs.data[k][j].is_zero() {
                        out.data[i][j] += &self.data[i][k] * &rhs.data[k][j];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self
            .data
            .iter()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().flatten().all(Zero::is_zero)
    }

    pub fn rref(&self) -> Echelon {
        rref(&self.data, self.cols)
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Inverse of a square matrix; `LinearlyDependent` when singular.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let aug: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut r = self.data[i].clone();
                r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        let e = rref(&aug, 2 * n);
        if e.pivots.len() < n || (n > 0 && e.pivots[n - 1] >= n) {
            return Err(Error::LinearlyDependent);
        }
        Matrix::from_rows(e.rows.iter().map(|r| r[n..].to_vec()).collect(), n)
    }

    /// Basis of `{x : Ax = 0}`, one vector per free column, in column order.
    pub fn null_space(&self) -> Vec<Vec<Rational>> {
        let e = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|j| !e.pivots.contains(j)) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (row, &p) in e.rows.iter().zip(&e.pivots) {
                v[p] = -row[free].clone();
            }
            basis.push(v);
        }
        basis
    }
}

/// Reduced row echelon form of the given rows (each of length `cols`).
pub fn rref(rows: &[Vec<Rational>], cols: usize) -> Echelon {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Echelon { rows: m, pivots }
}

pub fn rank_of(vectors: &[Vec<Rational>], dim: usize) -> usize {
    rref(vectors, dim).pivots.len()
}

impl fmt::Display for Matrix {
    /// `[1 0; 0 1]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.data.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            let cells: Vec<String> = r.iter().map(format_rational).collect();
            f.write_str(&cells.join(" "))?;
        }
        f.write_str("]")
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `(1, -1/2, 0)`
pub fn format_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linarith::int;

    #[test]
    fn rref_and_null_space() {
        let m = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.null_space();
        assert_eq!(ns.len(), 1);
        assert!(m.apply(&ns[0]).unwrap().iter().all(Zero::is_zero));
        assert_eq!(ns[0], vec![int(-1), int(-1), int(1)]);
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(2));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_err());
        assert_eq!(Matrix::zeros(0, 0).inverse().unwrap(), Matrix::zeros(0, 0));
    }

    #[test]
    fn product_and_display() {
        let a = Matrix::from_i64(&[&[1, 0]]);
        let b = Matrix::from_i64(&[&[1], &[1]]);
        assert_eq!(a.mul(&b).unwrap().to_string(), "[1]");
        assert_eq!(b.mul(&a).unwrap().to_string(), "[1 0; 1 0]");
        assert!(a.mul(&a).is_err());
    }
}
