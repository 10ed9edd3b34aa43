use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("chain is not reversible: {0}")]
    NonReversible(String),
    #[error("chain has fewer than two states")]
    TooFewStates,
    #[error("state count {size} exceeds the cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("negative value {value} at state {state}")]
    NegativeInput { state: usize, value: f64 },
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error("unknown beta function {0:?}")]
    InvalidBeta(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),
    #[error(transparent)]
    Core(#[from] flipwalk_core::CoreError),
}
