//! Hilbert spaces with labelled tensor factors, initial states, properties
//! (projectors) and projective decompositions.

mod property;
mod space;
mod state;

use thiserror::Error;

pub use property::{Decomposition, Property};
pub use space::{Factor, HilbertSpace};
pub use state::DensityMatrix;

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("a Hilbert space needs at least one factor")]
    NoFactors,
    #[error("factor `{0}` has dimension zero")]
    ZeroDimension(String),
    #[error("duplicate factor label `{0}`")]
    DuplicateFactor(String),
    #[error("unknown factor `{0}`")]
    UnknownFactor(String),
    #[error("expected a vector of length {expected}, got {got}")]
    VectorLength { expected: usize, got: usize },
    #[error("zero vector cannot be normalized")]
    ZeroVector,
    #[error("density matrix trace is {trace}, expected 1")]
    NotNormalized { trace: f64 },
    #[error("density matrix has negative eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },
    #[error("`{label}` is not a projector (asymmetry {asymmetry:e}, idempotence error {idempotence:e})")]
    NotProjector {
        label: String,
        asymmetry: f64,
        idempotence: f64,
    },
    #[error("vectors for `{label}` are linearly dependent (min Gram eigenvalue {min_gram_eigenvalue:e})")]
    DependentVectors { label: String, min_gram_eigenvalue: f64 },
    #[error("expected {expected} outcome labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate outcome label `{0}`")]
    DuplicateOutcome(String),
    #[error("property `{0}` lives on a different Hilbert space")]
    SpaceMismatch(String),
    #[error("members `{first}` and `{second}` are not orthogonal (max |PQ| = {overlap:e})")]
    NotOrthogonal {
        first: String,
        second: String,
        overlap: f64,
    },
    #[error("decomposition members do not sum to the identity (deviation {deviation:e})")]
    Incomplete { deviation: f64 },
}
