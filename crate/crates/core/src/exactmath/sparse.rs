//! Sparse vectors and an incremental echelon basis over an exact field.
//!
//! [`SparseEchelon`] keeps one row per pivot column with a unit leading
//! coefficient. Insertion reduces the new row against every existing pivot
//! (so the basis is semi-reduced); [`SparseEchelon::into_rref`] finishes the
//! back substitution. Membership queries record the row coefficients used,
//! which gives a certificate that can be re-checked by direct summation.

use std::collections::HashMap;
use std::fmt::Debug;

use num_traits::{One, Zero};

use super::modp::ModP;
use super::rational::Rational;
use super::MathError;

pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Self;
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

impl Field for ModP {
    fn zero() -> Self {
        ModP(0)
    }
    fn one() -> Self {
        ModP(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn sub(&self, o: &Self) -> Self {
        *self - *o
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn inv(&self) -> Self {
        ModP::inv(*self)
    }
}

/// Sorted `(column, value)` pairs without zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SparseVec<F> {
    entries: Vec<(u32, F)>,
}

impl<F: Field> SparseVec<F> {
    pub fn new() -> Self {
        SparseVec {
            entries: Vec::new(),
        }
    }

    /// Sorts, merges duplicate columns and drops zeros.
    pub fn from_entries(mut entries: Vec<(u32, F)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(u32, F)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            match out.last_mut() {
                Some(last) if last.0 == c => last.1 = last.1.add(&v),
                _ => out.push((c, v)),
            }
        }
        out.retain(|e| !e.1.is_zero());
        SparseVec { entries: out }
    }

    pub fn from_dense(v: &[F]) -> Self {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i as u32, x.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<F> {
        let mut out = vec![F::zero(); len];
        for (c, v) in &self.entries {
            out[*c as usize] = v.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(u32, F)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, col: u32) -> F {
        match self.entries.binary_search_by_key(&col, |e| e.0) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn max_col(&self) -> Option<u32> {
        self.entries.last().map(|e| e.0)
    }

    pub fn scale(&self, f: &F) -> Self {
        if f.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(c, v)| (*c, v.mul(f))).collect(),
        }
    }

    /// `self + f * other`.
    pub fn add_scaled(&self, f: &F, other: &SparseVec<F>) -> Self {
        self.add_scaled_from(0, f, other)
    }

    /// `self + f * other`, where the caller guarantees `other` has no
    /// entries on columns of `self.entries[..start]`.
    fn add_scaled_from(&self, start: usize, f: &F, other: &SparseVec<F>) -> Self {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        out.extend_from_slice(&self.entries[..start]);
        let (mut i, mut j) = (start, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, b[j].1.mul(f)));
                j += 1;
            } else {
                let v = a[i].1.add(&b[j].1.mul(f));
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> SparseVec<G> {
        SparseVec::from_entries(self.entries.iter().map(|(c, v)| (*c, f(v))).collect())
    }
}

/// Outcome of a row-space membership query.
#[derive(Clone, Debug)]
pub struct Membership<F> {
    pub member: bool,
    /// `(basis row index, coefficient)` such that the query equals the sum
    /// of coefficient times basis row plus `residual`.
    pub coefficients: Vec<(usize, F)>,
    pub residual: SparseVec<F>,
}

#[derive(Clone, Debug)]
pub struct SparseEchelon<F> {
    ncols: usize,
    rows: Vec<SparseVec<F>>,
    pivot_row: HashMap<u32, usize>,
}

impl<F: Field> SparseEchelon<F> {
    pub fn new(ncols: usize) -> Self {
        SparseEchelon {
            ncols,
            rows: Vec::new(),
            pivot_row: HashMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<F>] {
        &self.rows
    }

    /// Pivot column of each row, in row order.
    pub fn pivots(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r.entries[0].0).collect()
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.pivot_row.contains_key(&col)
    }

    /// Eliminates every pivot column from `v`. With `track`, records the
    /// multiple of each basis row that was subtracted.
    fn reduce(&self, v: &SparseVec<F>, mut track: Option<&mut Vec<(usize, F)>>) -> SparseVec<F> {
        let mut v = v.clone();
        let mut k = 0;
        while k < v.entries.len() {
            let (c, ref val) = v.entries[k];
            match self.pivot_row.get(&c) {
                Some(&r) => {
                    let f = val.clone();
                    if let Some(t) = track.as_deref_mut() {
                        t.push((r, f.clone()));
                    }
                    let neg = F::zero().sub(&f);
                    // rows[r] starts at column c, so entries before k are untouched
                    v = v.add_scaled_from(k, &neg, &self.rows[r]);
                }
                None => k += 1,
            }
        }
        v
    }

    /// Adds `v` to the span. Returns the index of the new basis row, or
    /// `None` when `v` was already in the span.
    pub fn insert(&mut self, v: &SparseVec<F>) -> Result<Option<usize>, MathError> {
        self.check_len(v)?;
        let r = self.reduce(v, None);
        if r.is_zero() {
            return Ok(None);
        }
        let lead = r.entries[0].1.inv();
        let r = r.scale(&lead);
        let idx = self.rows.len();
        self.pivot_row.insert(r.entries[0].0, idx);
        self.rows.push(r);
        Ok(Some(idx))
    }

    pub fn contains(&self, v: &SparseVec<F>) -> Result<Membership<F>, MathError> {
        self.check_len(v)?;
        let mut coefficients = Vec::new();
        let residual = self.reduce(v, Some(&mut coefficients));
        // merge repeated row indices
        let mut merged: Vec<(usize, F)> = Vec::new();
        coefficients.sort_by_key(|e| e.0);
        for (r, f) in coefficients {
            match merged.last_mut() {
                Some(last) if last.0 == r => last.1 = last.1.add(&f),
                _ => merged.push((r, f)),
            }
        }
        merged.retain(|e| !e.1.is_zero());
        Ok(Membership {
            member: residual.is_zero(),
            coefficients: merged,
            residual,
        })
    }

    /// Checks `target == Σ coeff · row` by direct summation.
    pub fn verify_combination(&self, coefficients: &[(usize, F)], target: &SparseVec<F>) -> bool {
        let mut acc = SparseVec::new();
        for (r, f) in coefficients {
            match self.rows.get(*r) {
                Some(row) => acc = acc.add_scaled(f, row),
                None => return false,
            }
        }
        &acc == target
    }

    /// Back substitution to reduced row echelon form; rows are returned
    /// sorted by pivot column.
    pub fn into_rref(mut self) -> Self {
        self.rows.sort_by_key(|r| r.entries[0].0);
        for i in (0..self.rows.len()).rev() {
            let row = &self.rows[i];
            let targets: Vec<(u32, F)> = row.entries[1..]
                .iter()
                .filter(|(c, _)| self.pivot_row.contains_key(c))
                .cloned()
                .collect();
            if targets.is_empty() {
                continue;
            }
            let mut acc = row.clone();
            for (c, f) in targets {
                let j = self
                    .rows
                    .binary_search_by_key(&c, |r| r.entries[0].0)
                    .expect("pivot row present");
                acc = acc.add_scaled(&F::zero().sub(&f), &self.rows[j]);
            }
            self.rows[i] = acc;
        }
        self.pivot_row = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.entries[0].0, i))
            .collect();
        self
    }

    pub fn is_rref(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].entries[0].0 < w[1].entries[0].0)
            && self.rows.iter().all(|r| {
                r.entries[0].1 == F::one()
                    && r.entries[1..]
                        .iter()
                        .all(|(c, _)| !self.pivot_row.contains_key(c))
            })
    }

    fn check_len(&self, v: &SparseVec<F>) -> Result<(), MathError> {
        match v.max_col() {
            Some(c) if c as usize >= self.ncols => Err(MathError::Input(format!(
                "column {c} outside a {}-column space",
                self.ncols
            ))),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, ratio};

    fn sv(v: &[i64]) -> SparseVec<Rational> {
        SparseVec::from_dense(&v.iter().map(|&x| rat(x)).collect::<Vec<_>>())
    }

    #[test]
    fn insert_detects_dependence() {
        let mut e = SparseEchelon::new(3);
        assert_eq!(e.insert(&sv(&[1, 2, 3])).unwrap(), Some(0));
        assert_eq!(e.insert(&sv(&[2, 4, 6])).unwrap(), None);
        assert_eq!(e.insert(&sv(&[0, 1, 1])).unwrap(), Some(1));
        assert_eq!(e.rank(), 2);
        let m = e.contains(&sv(&[1, 3, 4])).unwrap();
        assert!(m.member);
        assert!(e.verify_combination(&m.coefficients, &sv(&[1, 3, 4])));
        assert!(!e.contains(&sv(&[0, 0, 1])).unwrap().member);
    }

    #[test]
    fn rref_back_substitution() {
        let mut e = SparseEchelon::new(3);
        e.insert(&sv(&[0, 1, 1])).unwrap();
        e.insert(&sv(&[1, 2, 3])).unwrap();
        let r = e.into_rref();
        assert!(r.is_rref());
        assert_eq!(r.rows()[0].to_dense(3), vec![rat(1), rat(0), rat(1)]);
        assert_eq!(r.rows()[1].to_dense(3), vec![rat(0), rat(1), rat(1)]);
    }

    #[test]
    fn out_of_range_column_rejected() {
        let e: SparseEchelon<Rational> = SparseEchelon::new(2);
        assert!(e.contains(&sv(&[0, 0, 1])).is_err());
    }

    #[test]
    fn from_entries_merges() {
        let v = SparseVec::from_entries(vec![(3, rat(1)), (1, ratio(1, 2)), (3, rat(-1))]);
        assert_eq!(v.entries(), &[(1, ratio(1, 2))]);
    }
}
