//! Error type shared across the crate.

use thiserror::Error;

/// Errors reported by transform construction and evaluation.
#[derive(Debug, Error)]
pub enum TransformError {
    /// Two containers that must agree in shape do not.
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    /// The ambient dimension is outside the supported range.
    #[error("unsupported dimension {0}: only 2 and 3 are implemented")]
    UnsupportedDimension(usize),

    /// An axis or grid was constructed with invalid parameters.
    #[error("invalid axis: {0}")]
    AxisInvalid(String),

    /// A normalizing constant diverges for the requested pair.
    #[error("divergent constant: {0}")]
    DivergentConstant(String),

    /// A normalizing constant vanishes, so division by it is meaningless.
    #[error("zero constant: {0}")]
    ZeroConstant(String),

    /// The two half-line integrals defining a constant disagree.
    #[error(
        "half-line mismatch: positive side {positive:?} differs from negative side {negative:?}"
    )]
    HalfLineMismatch {
        positive: (f64, f64),
        negative: (f64, f64),
    },

    /// A quadrature tail estimate exceeds the accuracy budget.
    #[error("quadrature tail too large: {0}")]
    QuadratureTail(String),

    /// A moment of this order cannot be computed reliably for this profile.
    #[error("moment order {requested} unsupported for this profile (limit {limit})")]
    MomentOrderUnsupported { requested: usize, limit: usize },

    /// A name was not found in the activation or source catalog.
    #[error("unknown catalog entry: {0}")]
    UnknownCatalogEntry(String),
}

/// Convenient result alias used across the crate.
pub type Result<T> = std::result::Result<T, TransformError>;
