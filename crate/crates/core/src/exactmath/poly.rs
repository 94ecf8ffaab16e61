//! Sparse multivariate polynomials with rational coefficients.
//!
//! A polynomial owns a shared, ordered variable list and a term map from
//! exponent vectors to nonzero coefficients. Terms are kept in graded
//! lexicographic order, which is also the printing order (highest first).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::rational::{format_rational, is_negative, rat, Rational};
use super::MathError;

/// Ordered list of variable names shared between polynomials of one ring.
pub type Vars = Arc<[String]>;

/// Builds a variable list from names.
pub fn vars<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Vars {
    names.into_iter().map(|s| s.as_ref().to_string()).collect()
}

/// `prefix1, …, prefixN`.
pub fn indexed_vars(prefix: &str, n: usize) -> Vars {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Exponent vector. Ordered by total degree first, then lexicographically,
/// so `BTreeMap` iteration is graded-lex ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u32,
    exps: Box<[u32]>,
}

impl Monomial {
    pub fn new(exps: impl Into<Box<[u32]>>) -> Self {
        let exps = exps.into();
        let degree = exps.iter().sum();
        Monomial { degree, exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial::new(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let exps: Box<[u32]> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| a + b)
            .collect();
        Monomial {
            degree: self.degree + other.degree,
            exps,
        }
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial::new(
            self.exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a - b)
                .collect::<Vec<_>>(),
        )
    }
}

/// Operation selector for [`poly_arith`].
#[derive(Clone, Debug)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    Scale(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

/// Applies `op` to `a` and `b` (`b` is ignored for `Scale`). The operands
/// must share a variable list unless one of them is a bare constant.
pub fn poly_arith(a: &MultiPoly, b: &MultiPoly, op: PolyOp) -> Result<MultiPoly, MathError> {
    match op {
        PolyOp::Add => a.checked_add(b),
        PolyOp::Sub => a.checked_sub(b),
        PolyOp::Mul => a.checked_mul(b),
        PolyOp::Scale(c) => Ok(a.scale(&c)),
    }
}

impl MultiPoly {
    pub fn zero(vars: &Vars) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &Vars) -> Self {
        MultiPoly::constant(vars, Rational::one())
    }

    /// Constant with an empty variable list; combines with any ring.
    pub fn bare_constant(c: Rational) -> Self {
        MultiPoly::constant(&vars::<&str>([]), c)
    }

    /// The `i`-th variable of the ring (0-based).
    pub fn var(vars: &Vars, i: usize) -> Self {
        assert!(i < vars.len(), "variable index {i} out of range");
        let mut exps = vec![0; vars.len()];
        exps[i] = 1;
        let mut p = MultiPoly::zero(vars);
        p.terms.insert(Monomial::new(exps), Rational::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// exponent vectors are summed and zero coefficients dropped.
    pub fn from_terms(
        vars: &Vars,
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Result<Self, MathError> {
        let mut p = MultiPoly::zero(vars);
        for (exps, c) in terms {
            if exps.len() != vars.len() {
                return Err(MathError::Input(format!(
                    "exponent vector of length {} for {} variables",
                    exps.len(),
                    vars.len()
                )));
            }
            p.add_term(Monomial::new(exps), c);
        }
        Ok(p)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial::new(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Constant term's value when the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree)
    }

    /// True for the zero polynomial and for polynomials whose terms all
    /// have total degree `d`.
    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree == d)
    }

    /// Distinct total degrees over the variable positions in `range`.
    pub fn partial_degrees(&self, range: std::ops::Range<usize>) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .terms
            .keys()
            .map(|m| m.exps[range.clone()].iter().sum())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn lift(&self, vars: &Vars) -> MultiPoly {
        debug_assert!(self.vars.is_empty());
        MultiPoly::constant(vars, self.as_constant().unwrap_or_else(Rational::zero))
    }

    /// Resolves the common ring of two operands, lifting a bare constant.
    fn align<'a>(
        &'a self,
        other: &'a MultiPoly,
    ) -> Result<(std::borrow::Cow<'a, MultiPoly>, std::borrow::Cow<'a, MultiPoly>), MathError>
    {
        use std::borrow::Cow;
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            return Ok((Cow::Borrowed(self), Cow::Borrowed(other)));
        }
        if self.vars.is_empty() {
            return Ok((Cow::Owned(self.lift(&other.vars)), Cow::Borrowed(other)));
        }
        if other.vars.is_empty() {
            return Ok((Cow::Borrowed(self), Cow::Owned(other.lift(&self.vars))));
        }
        Err(MathError::Input(format!(
            "variable lists differ: [{}] vs [{}]",
            self.vars.join(", "),
            other.vars.join(", ")
        )))
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly, MathError> {
        let (a, b) = self.align(other)?;
        let mut out = a.into_owned();
        for (m, c) in &b.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly, MathError> {
        let (a, b) = self.align(other)?;
        let mut out = a.into_owned();
        for (m, c) in &b.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly, MathError> {
        let (a, b) = self.align(other)?;
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(MultiPoly {
            vars: a.vars.clone(),
            terms,
        })
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// In-place `self += c * other`.
    pub fn add_scaled(&mut self, other: &MultiPoly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        if self.vars.is_empty() && !other.vars.is_empty() {
            *self = self.lift(&other.vars);
        }
        assert!(
            other.vars.is_empty() || self.vars == other.vars,
            "variable lists differ"
        );
        for (m, v) in &other.terms {
            let m = if other.vars.is_empty() {
                Monomial::one(self.vars.len())
            } else {
                m.clone()
            };
            self.add_term(m, v * c);
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut result = MultiPoly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.to_vec();
            exps[i] -= 1;
            out.add_term(Monomial::new(exps), c * rat(e as i64));
        }
        out
    }

    /// Value at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational, MathError> {
        if point.len() != self.vars.len() {
            return Err(MathError::Input(format!(
                "point of length {} for {} variables",
                point.len(),
                self.vars.len()
            )));
        }
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(m.exps.iter()) {
                if e > 0 {
                    term *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Replaces variable `i` by `values[i]`; the result lives in the ring
    /// of `values`.
    pub fn substitute(&self, values: &[MultiPoly]) -> Result<MultiPoly, MathError> {
        if values.len() != self.vars.len() {
            return Err(MathError::Input(format!(
                "{} substitution values for {} variables",
                values.len(),
                self.vars.len()
            )));
        }
        let target = match values.iter().find(|v| !v.vars.is_empty()) {
            Some(v) => v.vars.clone(),
            None => vars::<&str>([]),
        };
        let values: Vec<MultiPoly> = values
            .iter()
            .map(|v| {
                if v.vars.is_empty() && !target.is_empty() {
                    Ok(v.lift(&target))
                } else if v.vars == target {
                    Ok(v.clone())
                } else {
                    Err(MathError::Input("substitution values in different rings".into()))
                }
            })
            .collect::<Result<_, _>>()?;
        let mut powers: HashMap<(usize, u32), MultiPoly> = HashMap::new();
        let mut out = MultiPoly::zero(&target);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(&target, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = powers
                    .entry((i, e))
                    .or_insert_with(|| values[i].pow(e))
                    .clone();
                term = &term * &p;
                if term.is_zero() {
                    break;
                }
            }
            out.add_scaled(&term, &Rational::one());
        }
        Ok(out)
    }

    /// Drops every term of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree <= max_degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Same terms, reinterpreted over another variable list of equal length.
    pub fn with_vars(&self, vars: &Vars) -> Result<MultiPoly, MathError> {
        if vars.len() != self.vars.len() {
            return Err(MathError::Input("variable list length mismatch".into()));
        }
        Ok(MultiPoly {
            vars: vars.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Exact quotient `self / divisor`; errors when the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Result<MultiPoly, MathError> {
        let (a, b) = self.align(divisor)?;
        let (lead_m, lead_c) = b
            .terms
            .iter()
            .next_back()
            .ok_or_else(|| MathError::Input("division by the zero polynomial".into()))?;
        let mut rem = a.into_owned();
        let mut quot = MultiPoly::zero(&rem.vars);
        while let Some((m, c)) = rem
            .terms
            .iter()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()))
        {
            if !lead_m.divides(&m) {
                return Err(MathError::Input("inexact polynomial division".into()));
            }
            let qm = m.div(lead_m);
            let qc = c / lead_c;
            for (bm, bc) in &b.terms {
                rem.add_term(bm.mul(&qm), -(bc * &qc));
            }
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    /// Panics when the operands live in different rings.
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("polynomial add")
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_sub(rhs).expect("polynomial sub")
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("polynomial mul")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = m
                .exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], e)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", format_rational(&abs))?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
