use thiserror::Error;

/// Errors raised by the germ calculus.
///
/// Variants split into two families that the command-line front end maps to
/// distinct exit codes: domain errors (bad inputs, violated preconditions) and
/// numeric-confidence errors (root finders, integrators, fits).
#[derive(Debug, Clone, Error, PartialEq)]
pub enum GermError {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("multi-index of degree {degree} exceeds truncation order {trunc}")]
    TruncationExceeded { degree: u32, trunc: u32 },

    #[error("insufficient truncation: need at least {needed}, have {available}")]
    InsufficientTruncation { needed: u32, available: u32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl GermError {
    /// True for failures of numerical confidence rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(self, GermError::Numeric(_) | GermError::Inconclusive(_))
    }
}

pub type Result<T> = std::result::Result<T, GermError>;
