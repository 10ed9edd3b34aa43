use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("polygon parameter {n} exceeds the cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("polygon parameter must be at least {min}, got {n}")]
    TooSmall { n: usize, min: usize },
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("diagonal ({0}, {1}) is not in the triangulation")]
    DiagonalNotPresent(usize, usize),
    #[error("invalid side lengths r={r}, s={s} for n={n}")]
    InvalidSideLengths { n: usize, r: usize, s: usize },
    #[error("weights must be non-negative and sum to one")]
    InvalidWeights,
    #[error("block {0} is empty or does not exist")]
    EmptyBlock(usize),
    #[error("blocks {0} and {1} are not adjacent")]
    BlocksNotAdjacent(usize, usize),
    #[error("bijection failure: {0}")]
    BijectionFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
}
