use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A requested dimension or qubit count exceeds the configured cap.
    #[error("size {requested} exceeds the configured cap {cap}")]
    SizeLimit { requested: usize, cap: usize },
    /// An argument is outside its admissible range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Two operands do not have compatible shapes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// The input violates a state invariant (trace, hermiticity, positivity, norm).
    #[error("invalid state: {0}")]
    InvalidState(String),
    /// A textual specification could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// No evaluation path is available for the requested combination.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A numerical routine failed (singular system, non-convergence).
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
