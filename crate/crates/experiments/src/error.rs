use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("{suite}: n = {n} exceeds the cap {cap} (use --cap-override)")]
    CapExceeded { suite: &'static str, n: usize, cap: usize },
    #[error("row for {experiment} is missing metric {metric}")]
    MissingMetric { experiment: String, metric: String },
    #[error("unknown experiment id {0}")]
    UnknownExperiment(String),
    #[error(transparent)]
    Core(#[from] flipwalk_core::CoreError),
    #[error(transparent)]
    Analysis(#[from] flipwalk_analysis::AnalysisError),
    #[error(transparent)]
    Flow(#[from] flipwalk_flow::FlowError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
