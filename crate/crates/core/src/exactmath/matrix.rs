//! Dense rational matrices with exact reduced row echelon form.

use num_traits::{One, Zero};

use super::rational::Rational;
use super::MathError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Rational>>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![vec![Rational::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Rational::one();
        }
        m
    }

    /// Builds from row vectors; all rows must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self, MathError> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(MathError::Input(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        Ok(RationalMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&v| super::rat(v)).collect())
            .collect();
        RationalMatrix::from_rows(cols, data).expect("ragged integer matrix")
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

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.data.iter().map(Vec::as_slice)
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix, MathError> {
        if self.cols != other.rows {
            return Err(MathError::Input("matrix product dimension mismatch".into()));
        }
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Drops all-zero rows.
    fn without_zero_rows(mut self) -> Self {
        self.data.retain(|r| r.iter().any(|v| !v.is_zero()));
        self.rows = self.data.len();
        self
    }
}

/// Reduced row echelon form and pivot columns. Zero rows are kept at the
/// bottom so the output has the input's shape.
pub fn rref(m: &RationalMatrix) -> (RationalMatrix, Vec<usize>) {
    let mut a = m.data.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut().skip(c) {
            *v *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(pivot_row.iter()).skip(c) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (
        RationalMatrix {
            rows: m.rows,
            cols: m.cols,
            data: a,
        },
        pivots,
    )
}

/// Whether `v` lies in the row space of `basis`, which must be in reduced
/// row echelon form (zero rows allowed).
pub fn in_row_space(basis: &RationalMatrix, v: &[Rational]) -> Result<bool, MathError> {
    if v.len() != basis.cols {
        return Err(MathError::Input(format!(
            "vector of length {} against {} columns",
            v.len(),
            basis.cols
        )));
    }
    let basis = basis.clone().without_zero_rows();
    // In RREF the only candidate combination uses v's entries at the pivots.
    let mut residual = v.to_vec();
    for row in basis.rows() {
        let pivot = row
            .iter()
            .position(|x| !x.is_zero())
            .expect("nonzero row");
        if !row[pivot].is_one() {
            return Err(MathError::Input("basis is not in reduced row echelon form".into()));
        }
        let f = residual[pivot].clone();
        if f.is_zero() {
            continue;
        }
        for (x, b) in residual.iter_mut().zip(row) {
            if !b.is_zero() {
                *x -= &f * b;
            }
        }
    }
    Ok(residual.iter().all(Zero::is_zero))
}
