use thiserror::Error;

/// Errors raised by the sumset toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("set must contain at least {min} element(s), got {got}")]
    TooFewElements { min: usize, got: usize },

    #[error("duplicate element {0} in set")]
    Duplicate(String),

    #[error("operation requires dimension 1, got {0}")]
    NotOneDimensional(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse set literal: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    /// The trivial chain failed to increase strictly. Valid ordered input
    /// never triggers this, so seeing it means an internal bug.
    #[error("trivial chain not strictly increasing at position {position}")]
    ChainNotIncreasing { position: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
