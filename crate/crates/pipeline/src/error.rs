use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Core(#[from] tempered_core::Error),
    #[error(transparent)]
    Density(#[from] tempered_density::DensityError),
    #[error(transparent)]
    Estimate(#[from] tempered_estimate::EstimateError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("GARCH fit failed ({message}); last iterate omega = {omega}, a = {a}, b = {b}")]
    Garch { omega: f64, a: f64, b: f64, message: String },
}

pub type Result<T, E = PipelineError> = std::result::Result<T, E>;
