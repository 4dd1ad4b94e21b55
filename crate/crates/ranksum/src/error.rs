//! Shared error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An enumeration or expansion would exceed the configured cap.
    #[error("size {requested} exceeds the enumeration cap of {cap}; raise the cap explicitly to proceed")]
    ResourceLimit { requested: usize, cap: usize },

    /// An ROC curve was requested for an all-zero or all-one outcome vector.
    #[error("outcome vector is degenerate ({positives} of {n} positive): ROC curve is undefined")]
    DegenerateOutcome { positives: usize, n: usize },

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A conditional quantity is undefined because the conditioning event has
    /// probability zero.
    #[error("undefined conditional: {0}")]
    UndefinedConditional(String),

    /// Text parse failure; the message carries the byte offset where known.
    #[error("parse error: {0}")]
    Parse(String),
}
