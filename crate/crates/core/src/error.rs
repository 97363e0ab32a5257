use thiserror::Error;

/// Errors produced by the extremal-problem toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite angle in arc specification")]
    NonFiniteAngle,
    #[error("arc ({start}, {end}) has zero length")]
    EmptyArc { start: f64, end: f64 },
    #[error("arc ({start}, {end}) is longer than the full circle")]
    ArcTooLong { start: f64, end: f64 },
    #[error("cannot parse set specification: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix of size {0} is too large for the dense oracle")]
    TooLarge(usize),
    #[error("point {0} lies on a singularity of the map")]
    Singular(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
