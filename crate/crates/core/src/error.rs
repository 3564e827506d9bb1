use thiserror::Error;

/// Errors raised by structure mutation and queries.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value {0} is not a finite number")]
    NonFiniteValue(f64),

    #[error("position {position} does not exceed the last inserted position {last}")]
    NonMonotonePosition { position: u64, last: u64 },

    #[error("operation requires a non-empty structure")]
    EmptyStructure,

    #[error("node at position {position} is not the oldest node in the structure")]
    NotOldest { position: u64 },

    #[error("slope bound must be a finite non-negative number, got {0}")]
    InvalidSlope(f64),

    #[error("invalid range constraint: {0}")]
    InvalidRange(String),

    #[error("window capacity must be at least 1")]
    ZeroCapacity,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
