use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated (bad dimension range,
    /// non-positive parameter, degenerate input, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two inputs that must share a dimension do not.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A matrix that must be Hermitian positive-definite is not.
    #[error("matrix is not positive-definite")]
    NotPositiveDefinite,

    /// A structure candidate failed its numerical validation.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An internal consistency check failed; indicates a bug or a loss of
    /// precision beyond the design envelope.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
