use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Core(#[from] tempered_core::Error),
    #[error(transparent)]
    Estimate(#[from] tempered_estimate::EstimateError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot read configuration: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot build worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

pub type Result<T, E = ExperimentError> = std::result::Result<T, E>;
