use thiserror::Error;

/// Errors raised by the mining engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series is empty")]
    Empty,
    /// `position` is 1-based, matching line numbers of the input file.
    #[error("non-finite value at position {0}")]
    NonFinite(usize),
    #[error("subsequence length {length} exceeds series length {n}")]
    LengthExceedsSeries { length: usize, n: usize },
    #[error("window at offset {offset} with length {length} exceeds series length {n}")]
    OutOfRange { offset: usize, length: usize, n: usize },
    #[error("zero-variance subsequence")]
    ZeroVariance,
    #[error("series of length {n} is too short for subsequence length {length}")]
    SeriesTooShort { n: usize, length: usize },
    #[error("every subsequence of length {0} is constant")]
    AllConstant(usize),
    #[error("no non-trivial neighbor for offset {offset} at length {length}")]
    NoValidNeighbor { offset: usize, length: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("variable-length matrix profile has no populated entry")]
    Unpopulated,
    #[error("TLB is undefined for a zero true distance")]
    ZeroDistance,
}

pub type Result<T> = std::result::Result<T, Error>;
