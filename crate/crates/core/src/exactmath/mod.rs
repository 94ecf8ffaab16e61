//! Exact arithmetic: rationals, sparse multivariate polynomials and exact
//! linear algebra (row reduction, row-space membership, determinants).

mod matrix;
mod modp;
mod poly;
mod polymatrix;
mod rational;
mod sparse;

pub use matrix::{in_row_space, rref, RationalMatrix};
pub use modp::{ModP, MODULUS};
pub use poly::{indexed_vars, poly_arith, vars, Monomial, MultiPoly, PolyOp, Vars};
pub use polymatrix::{det, det_bareiss, det_cofactor, PolyMatrix};
pub use rational::{
    common_denominator, factorial, format_rational, parse_rational, rat, ratio, Rational,
};
pub use sparse::{Field, Membership, SparseEchelon, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MathError {
    #[error("input error: {0}")]
    Input(String),
    #[error("parse error: {0}")]
    Parse(String),
}
