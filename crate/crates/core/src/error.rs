use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HurwitzError {
    /// Malformed or out-of-regime input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Two permutations of different degree were combined.
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    /// A documented precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The search would exceed the configured limits.
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    /// An internal consistency check failed.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, HurwitzError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(HurwitzError::InvalidInput(msg.into()))
}
