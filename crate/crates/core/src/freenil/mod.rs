//! Multilinear components of the free symmetric d-ary algebra.
//!
//! A degree-q component is spanned by leaf-labeled trees with unordered
//! children and leaves labeled bijectively by `1..=q`.

mod element;
mod ideal;
mod lift;
mod onevar;
mod tree;
mod verify;

use crate::exactmath::MathError;

pub use element::{
    coefficient_sum, engel_element, polarize_t, symmetrized_shape, MultilinearElement, TreeBasis,
};
pub use ideal::{
    component_dimension, ideal_rows, ideal_span, ideal_span_with, Certificate, IdealBasis,
    IdealRows, SpanOptions, DEFAULT_MAX_BASIS_TREES,
};
pub use onevar::{t_in_shapes, OneVarIdeal, ShapeCombination};
pub use tree::{
    admissible_size, enumerate_trees, for_each_product, for_each_subset, set_partitions,
    shapes_by_internal_count, shapes_with_leaves, Tree,
};
pub use verify::{
    engel_degree, theorem_engel_bound, verify_binary_claim, verify_main_theorem, window_generators,
    CheckRecord, MinimalityProbe, TheoremReport, Timing, Verdict, VerifyOptions,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FreeNilError {
    #[error("input error: {0}")]
    Input(String),
    #[error("degree-{degree} component has {trees} basis trees, above the cap of {cap}")]
    ResourceCap { degree: usize, trees: u128, cap: usize },
    #[error(transparent)]
    Math(#[from] MathError),
}
