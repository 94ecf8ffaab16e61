//! Square and rectangular matrices of polynomials, with determinants by
//! fraction-free elimination and by cofactor expansion.

use std::fmt;

use num_traits::One;

use super::poly::{MultiPoly, Vars};
use super::MathError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    vars: Vars,
    rows: usize,
    cols: usize,
    data: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn zeros(vars: &Vars, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            vars: vars.clone(),
            rows,
            cols,
            data: vec![MultiPoly::zero(vars); rows * cols],
        }
    }

    pub fn identity(vars: &Vars, n: usize) -> Self {
        let mut m = PolyMatrix::zeros(vars, n, n);
        for i in 0..n {
            m.set(i, i, MultiPoly::one(vars));
        }
        m
    }

    pub fn from_rows(vars: &Vars, rows: Vec<Vec<MultiPoly>>) -> Result<Self, MathError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(MathError::Input("ragged polynomial matrix".into()));
        }
        let nrows = rows.len();
        let data = rows
            .into_iter()
            .flatten()
            .map(|p| {
                if p.vars().is_empty() {
                    MultiPoly::constant(vars, p.as_constant().unwrap_or_else(num_traits::Zero::zero))
                } else if p.vars() == vars {
                    p
                } else {
                    panic!("matrix entry in a different ring")
                }
            })
            .collect();
        Ok(PolyMatrix {
            vars: vars.clone(),
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: MultiPoly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(MultiPoly::is_zero)
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &MultiPoly)> {
        self.data
            .iter()
            .position(|p| !p.is_zero())
            .map(|k| (k / self.cols, k % self.cols, &self.data[k]))
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, MathError> {
        if self.cols != other.rows {
            return Err(MathError::Input("matrix product dimension mismatch".into()));
        }
        let mut out = PolyMatrix::zeros(&self.vars, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix, MathError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MathError::Input("matrix sum dimension mismatch".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<_, _>>()?;
        Ok(PolyMatrix {
            vars: self.vars.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, c: &super::Rational) -> PolyMatrix {
        PolyMatrix {
            vars: self.vars.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Applies `f` to every entry (e.g. substitution into another ring).
    pub fn try_map(
        &self,
        vars: &Vars,
        f: impl Fn(&MultiPoly) -> Result<MultiPoly, MathError>,
    ) -> Result<PolyMatrix, MathError> {
        let data = self.data.iter().map(f).collect::<Result<_, _>>()?;
        Ok(PolyMatrix {
            vars: vars.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    fn require_square(&self) -> Result<(), MathError> {
        if self.rows != self.cols {
            return Err(MathError::Input(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(())
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &PolyMatrix) -> Result<MultiPoly, MathError> {
    det_bareiss(m)
}

pub fn det_bareiss(m: &PolyMatrix) -> Result<MultiPoly, MathError> {
    m.require_square()?;
    let n = m.rows;
    if n == 0 {
        return Ok(MultiPoly::one(&m.vars));
    }
    let mut a: Vec<Vec<MultiPoly>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let mut negate = false;
    let mut prev = MultiPoly::one(&m.vars);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(MultiPoly::zero(&m.vars)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -&d } else { d })
}

/// Laplace expansion along the first row; exponential, for small sizes
/// and cross-checks.
pub fn det_cofactor(m: &PolyMatrix) -> Result<MultiPoly, MathError> {
    m.require_square()?;
    let cols: Vec<usize> = (0..m.cols).collect();
    Ok(cofactor(m, 0, &cols))
}

fn cofactor(m: &PolyMatrix, row: usize, cols: &[usize]) -> MultiPoly {
    if cols.is_empty() {
        return MultiPoly::one(&m.vars);
    }
    let mut acc = MultiPoly::zero(&m.vars);
    for (k, &c) in cols.iter().enumerate() {
        let entry = m.get(row, c);
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = cofactor(m, row + 1, &rest);
        let sign = if k % 2 == 0 {
            super::Rational::one()
        } else {
            -super::Rational::one()
        };
        acc.add_scaled(&(entry * &minor), &sign);
    }
    acc
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{indexed_vars, rat};

    #[test]
    fn jacobian_of_triangular_map() {
        let v = indexed_vars("X", 2);
        let x1 = MultiPoly::var(&v, 0);
        let m = PolyMatrix::from_rows(
            &v,
            vec![
                vec![MultiPoly::one(&v), MultiPoly::zero(&v)],
                vec![x1.scale(&rat(-2)), MultiPoly::one(&v)],
            ],
        )
        .unwrap();
        assert_eq!(det(&m).unwrap(), MultiPoly::one(&v));
        assert_eq!(det_cofactor(&m).unwrap(), MultiPoly::one(&v));
    }

    #[test]
    fn identity_and_repeated_rows() {
        let v = indexed_vars("X", 3);
        assert_eq!(det(&PolyMatrix::identity(&v, 3)).unwrap(), MultiPoly::one(&v));
        let x = |i| MultiPoly::var(&v, i);
        let r = vec![&x(0) + &x(1), &x(1) * &x(2), MultiPoly::one(&v)];
        let m = PolyMatrix::from_rows(&v, vec![r.clone(), vec![x(2), x(0), x(1)], r]).unwrap();
        assert!(det(&m).unwrap().is_zero());
    }

    #[test]
    fn zero_pivot_requires_swap() {
        let v = indexed_vars("X", 1);
        let x = MultiPoly::var(&v, 0);
        // [[0, x], [1, 0]] has determinant -x
        let m = PolyMatrix::from_rows(
            &v,
            vec![vec![MultiPoly::zero(&v), x.clone()], vec![MultiPoly::one(&v), MultiPoly::zero(&v)]],
        )
        .unwrap();
        assert_eq!(det(&m).unwrap(), -&x);
    }

    #[test]
    fn non_square_is_an_input_error() {
        let v = indexed_vars("X", 1);
        let m = PolyMatrix::zeros(&v, 2, 3);
        assert!(matches!(det(&m), Err(MathError::Input(_))));
    }
}
