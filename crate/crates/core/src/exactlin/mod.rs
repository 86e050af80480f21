//! Exact integer linear algebra: sparse integer matrices, Smith normal form,
//! ranks over prime fields, chain-complex homology and truncated Poincaré
//! series.

mod homology;
mod matrix;
mod series;
mod snf;

pub use homology::{homology_of_complex, Coefficients, Homology};
pub use matrix::IntMatrix;
pub use series::{PoincareSeries, DEFAULT_TRUNCATION};
pub use snf::{
    rank_mod_prime, rank_rational, smith_normal_form, smith_normal_form_with_transforms, SmithForm,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("shape mismatch: {left:?} against {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("boundary composition ∂{degree}∘∂{} is nonzero", degree + 1)]
    CompositionNonzero { degree: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
}
