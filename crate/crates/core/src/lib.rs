//! Exact verification toolkit for symmetric multilinear algebras.

pub mod algebra;
pub mod exactmath;
pub mod formats;
pub mod freenil;
pub mod polymap;
