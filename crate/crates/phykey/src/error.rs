//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A pilot symbol was zero, so least-squares inversion is undefined.
    #[error("division by zero: pilot symbol at subcarrier {0} is zero")]
    DivisionByZero(usize),

    /// A subblock had no subcarrier strictly above (or all above) its mean,
    /// so the pattern codebook has no entry for it.
    #[error("degenerate pattern: {0} of {1} subcarriers above the subblock mean")]
    DegeneratePattern(usize, usize),

    /// An operation that needs at least one key bit received none.
    #[error("empty key")]
    EmptyKey,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
