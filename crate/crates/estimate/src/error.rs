use thiserror::Error;

#[derive(Debug, Error)]
pub enum EstimateError {
    #[error(transparent)]
    Core(#[from] tempered_core::Error),
    #[error(transparent)]
    Density(#[from] tempered_density::DensityError),
    #[error("matrix is not symmetric (max asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("matrix is singular: {0}")]
    Singular(String),
    #[error("{method} is not available for the {family} family")]
    Unsupported { method: &'static str, family: tempered_core::Family },
    #[error("sample of size {n} is too small (need at least {needed})")]
    SampleTooSmall { n: usize, needed: usize },
    #[error("no valid starting value: {0}")]
    NoStart(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, EstimateError>;
