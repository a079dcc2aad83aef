use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DensityError {
    #[error(transparent)]
    Core(#[from] tempered_core::Error),

    #[error("quadrature did not converge ({reason}): value {value}, error estimate {error}")]
    Quadrature { value: f64, error: f64, reason: &'static str },

    #[error("stable density at y = {y}: {reason} (series terms {terms}, cancellation ratio {ratio:.3e})")]
    Series { y: f64, terms: usize, ratio: f64, reason: &'static str },

    #[error("FFT configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T, E = DensityError> = std::result::Result<T, E>;
