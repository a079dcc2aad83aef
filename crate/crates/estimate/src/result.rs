use std::fmt;

use serde::{Deserialize, Serialize};
use tempered_core::{Bounds, Params};
use tempered_density::FftConfig;

use crate::optim::{OptimOptions, OptimResult};
use crate::regularize::RegularizationScheme;

/// Tolerance for reporting a component as sitting on a bound.
pub const BOUNDARY_TOL: f64 = 1e-6;

/// Estimation method with its tuning constants; `None` selects the default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Method {
    Mle,
    Gmm {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        r: Option<usize>,
    },
    Cgmm {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        nodes: Option<usize>,
    },
    Gmc {
        p: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma: Option<f64>,
    },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Mle => "mle",
            Method::Gmm { .. } => "gmm",
            Method::Cgmm { .. } => "cgmm",
            Method::Gmc { .. } => "gmc",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Mle => write!(f, "MLE"),
            Method::Gmm { .. } => write!(f, "GMM"),
            Method::Cgmm { .. } => write!(f, "CGMM"),
            Method::Gmc { p, .. } => write!(f, "GMC (p={p})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    pub method: Method,
    pub theta_hat: Params,
    /// Log-likelihood for MLE; value of the minimised quadratic form otherwise.
    pub objective: f64,
    pub converged: bool,
    pub iterations: usize,
    pub runtime_seconds: f64,
    pub boundary_hit: bool,
}

impl EstimationResult {
    pub(crate) fn from_optim(method: Method, opt: &OptimResult, theta_hat: Params, objective: f64, bounds: &Bounds, runtime: f64) -> Self {
        let boundary_hit = bounds.boundary_hit(&theta_hat.values(), BOUNDARY_TOL);
        Self { method, theta_hat, objective, converged: opt.converged, iterations: opt.iterations, runtime_seconds: runtime, boundary_hit }
    }
}

/// Settings shared by all estimators.
#[derive(Debug, Clone, Default)]
pub struct FitOptions {
    /// Parameter box; the standard box of the family when `None`.
    pub bounds: Option<Bounds>,
    /// Starting value; moment-based and fixed fallback starts when `None`.
    pub start: Option<Params>,
    pub optim: OptimOptions,
    /// Grid settings for FFT densities (MLE for CTS/NTS).
    pub fft: FftConfig,
}

pub(crate) fn scheme_or_default(kind: fn(f64) -> RegularizationScheme, gamma: Option<f64>) -> RegularizationScheme {
    kind(gamma.unwrap_or(RegularizationScheme::DEFAULT_GAMMA))
}
