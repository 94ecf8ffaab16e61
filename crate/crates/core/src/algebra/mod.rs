//! Finite-dimensional symmetric d-linear algebras over the rationals.
//!
//! The structure tensor is stored once per non-decreasing input tuple;
//! lookups for any permutation of the inputs return the same value.

mod builtin;
mod nil;
mod ops;
mod symbolic;

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::exactmath::{format_rational, MathError, Rational};

pub use builtin::{cube, graded_nilpotent, truncated, zero_algebra};
pub use nil::{
    engel_index, gerstenhaber_index, t_vanishes_through, yagzhev_index, yagzhev_window_top, NilKind,
    NilReport,
};
pub use ops::{ad_matrix, ad_pow, dg, dgamma, g_map, gamma, linearized_terms, mu, t_term, TSeries};
pub use symbolic::{GenericRing, SymbolicElement};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error(
        "symmetry violation: inputs {first:?} -> {output} has value {first_value}, \
         but permuted inputs {second:?} -> {output} has value {second_value}"
    )]
    Symmetry {
        first: Vec<usize>,
        second: Vec<usize>,
        output: usize,
        first_value: String,
        second_value: String,
    },
    #[error("invalid algebra: {0}")]
    Invalid(String),
    #[error("input error: {0}")]
    Input(String),
    #[error(transparent)]
    Math(#[from] MathError),
}

/// One raw structure constant, 1-based: `μ(e_{inputs…})` has coefficient
/// `value` on `e_output`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorEntry {
    pub inputs: Vec<usize>,
    pub output: usize,
    pub value: Rational,
}

/// Normalized product of one sorted input tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Product {
    /// Non-decreasing, 0-based.
    pub inputs: Vec<usize>,
    /// Distinct orderings of `inputs`.
    pub orderings: Vec<Vec<usize>>,
    /// `(output index, coefficient)`, 0-based, nonzero coefficients only.
    pub outputs: Vec<(usize, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilinearAlgebra {
    arity: usize,
    dim: usize,
    basis_names: Option<Vec<String>>,
    products: Vec<Product>,
}

impl MultilinearAlgebra {
    /// Validates raw entries and builds the normalized algebra. Entries
    /// listing permuted inputs with equal values are merged; differing
    /// values are a symmetry violation.
    pub fn new(arity: usize, dim: usize, entries: &[TensorEntry]) -> Result<Self, AlgebraError> {
        if arity < 2 {
            return Err(AlgebraError::Invalid(format!("arity {arity} is below 2")));
        }
        if dim < 1 {
            return Err(AlgebraError::Invalid("dimension must be at least 1".into()));
        }
        // (sorted inputs, output) -> (value, raw inputs of first occurrence)
        let mut seen: BTreeMap<(Vec<usize>, usize), (Rational, Vec<usize>)> = BTreeMap::new();
        for e in entries {
            if e.inputs.len() != arity {
                return Err(AlgebraError::Invalid(format!(
                    "entry {:?} has {} inputs, arity is {arity}",
                    e.inputs,
                    e.inputs.len()
                )));
            }
            if let Some(bad) = e
                .inputs
                .iter()
                .chain(std::iter::once(&e.output))
                .find(|&&i| i < 1 || i > dim)
            {
                return Err(AlgebraError::Invalid(format!(
                    "basis index {bad} outside 1..={dim} in entry {:?} -> {}",
                    e.inputs, e.output
                )));
            }
            let mut key = e.inputs.clone();
            key.sort_unstable();
            match seen.get(&(key.clone(), e.output)) {
                Some((v, raw)) if *v != e.value => {
                    return Err(AlgebraError::Symmetry {
                        first: raw.clone(),
                        second: e.inputs.clone(),
                        output: e.output,
                        first_value: format_rational(v),
                        second_value: format_rational(&e.value),
                    });
                }
                Some(_) => {}
                None => {
                    seen.insert((key, e.output), (e.value.clone(), e.inputs.clone()));
                }
            }
        }
        let mut grouped: BTreeMap<Vec<usize>, Vec<(usize, Rational)>> = BTreeMap::new();
        for ((key, out), (v, _)) in seen {
            if v.is_zero() {
                continue;
            }
            let key0: Vec<usize> = key.iter().map(|i| i - 1).collect();
            grouped.entry(key0).or_default().push((out - 1, v));
        }
        let products = grouped
            .into_iter()
            .map(|(inputs, outputs)| Product {
                orderings: distinct_orderings(&inputs),
                inputs,
                outputs,
            })
            .collect();
        Ok(MultilinearAlgebra {
            arity,
            dim,
            basis_names: None,
            products,
        })
    }

    pub fn with_basis_names(mut self, names: Vec<String>) -> Result<Self, AlgebraError> {
        if names.len() != self.dim {
            return Err(AlgebraError::Invalid(format!(
                "{} basis names for dimension {}",
                names.len(),
                self.dim
            )));
        }
        self.basis_names = Some(names);
        Ok(self)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> Option<&[String]> {
        self.basis_names.as_deref()
    }

    pub fn is_zero(&self) -> bool {
        self.products.is_empty()
    }

    pub(crate) fn products(&self) -> &[Product] {
        &self.products
    }

    /// Coefficient of `e_output` in `μ(e_inputs…)`, 1-based, any order.
    pub fn coefficient(&self, inputs: &[usize], output: usize) -> Rational {
        let mut key: Vec<usize> = inputs.iter().map(|i| i - 1).collect();
        key.sort_unstable();
        self.products
            .iter()
            .find(|p| p.inputs == key)
            .and_then(|p| p.outputs.iter().find(|(o, _)| *o + 1 == output))
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Normalized entries (sorted inputs, 1-based).
    pub fn entries(&self) -> Vec<TensorEntry> {
        self.products
            .iter()
            .flat_map(|p| {
                p.outputs.iter().map(move |(o, v)| TensorEntry {
                    inputs: p.inputs.iter().map(|i| i + 1).collect(),
                    output: o + 1,
                    value: v.clone(),
                })
            })
            .collect()
    }
}

/// The `validate` entry point: normalized algebra or the first violation.
pub fn validate(arity: usize, dim: usize, entries: &[TensorEntry]) -> Result<MultilinearAlgebra, AlgebraError> {
    MultilinearAlgebra::new(arity, dim, entries)
}

fn distinct_orderings(sorted: &[usize]) -> Vec<Vec<usize>> {
    // lexicographic next-permutation over a sorted multiset
    let mut cur = sorted.to_vec();
    let mut out = vec![cur.clone()];
    loop {
        let n = cur.len();
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}
