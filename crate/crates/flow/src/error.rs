use flipwalk_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("invalid pinning {0}")]
    InvalidPinning(String),
    #[error("vertex {j} is not adjacent to pinning {pinning}")]
    NotAdjacent { j: usize, pinning: String },
    #[error("source and target blocks must differ (got {0})")]
    SameBlock(usize),
    #[error("states {0} and {1} are not joined by a transition")]
    NotAnEdge(usize, usize),
    #[error("edge ({0},{1}) leaves the union of the two blocks")]
    OutsideDomain(usize, usize),
    #[error("flow axiom violated: {0}")]
    AxiomViolation(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("n = {n} exceeds the exhaustive cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error(transparent)]
    Core(#[from] CoreError),
}
