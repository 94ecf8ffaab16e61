//! Built-in example algebras.

use super::{MultilinearAlgebra, TensorEntry};
use crate::exactmath::{rat, Rational};

/// `Tr(m)`: binary, dimension `m`, `e_i e_j = e_{i+j}` when `i + j ≤ m`.
/// The algebra of truncated polynomials `tℂ[t]/(t^{m+1})`.
pub fn truncated(m: usize) -> MultilinearAlgebra {
    assert!(m >= 1);
    let mut entries = Vec::new();
    for i in 1..=m {
        for j in i..=m {
            if i + j <= m {
                entries.push(TensorEntry {
                    inputs: vec![i, j],
                    output: i + j,
                    value: rat(1),
                });
            }
        }
    }
    MultilinearAlgebra::new(2, m, &entries)
        .expect("valid")
        .with_basis_names((1..=m).map(|i| format!("e{i}")).collect())
        .expect("valid")
}

pub fn zero_algebra(arity: usize, dim: usize) -> MultilinearAlgebra {
    MultilinearAlgebra::new(arity, dim, &[]).expect("valid")
}

/// Ternary, one-dimensional, `μ(e1, e1, e1) = e1`; `H(X) = X³`. Not nil.
pub fn cube() -> MultilinearAlgebra {
    MultilinearAlgebra::new(
        3,
        1,
        &[TensorEntry {
            inputs: vec![1, 1, 1],
            output: 1,
            value: rat(1),
        }],
    )
    .expect("valid")
}

/// Algebra with `μ(e_{i_1}, …, e_{i_d}) ∈ span{e_j : j > max i_k}`; every
/// such algebra is nilpotent. `coeff(sorted 1-based inputs, output)`
/// supplies the structure constants.
pub fn graded_nilpotent(
    arity: usize,
    dim: usize,
    mut coeff: impl FnMut(&[usize], usize) -> Rational,
) -> MultilinearAlgebra {
    let mut entries = Vec::new();
    let mut tuple = vec![1usize; arity];
    loop {
        let top = *tuple.last().unwrap();
        for out in top + 1..=dim {
            entries.push(TensorEntry {
                inputs: tuple.clone(),
                output: out,
                value: coeff(&tuple, out),
            });
        }
        // next non-decreasing tuple
        let Some(k) = (0..arity).rev().find(|&k| tuple[k] < dim) else {
            break;
        };
        tuple[k] += 1;
        for j in k + 1..arity {
            tuple[j] = tuple[k];
        }
    }
    MultilinearAlgebra::new(arity, dim, &entries).expect("valid")
}
