//! Estimators for tempered stable laws: maximum likelihood, GMM on a finite
//! characteristic-function grid, continuum GMM and the generalised method of
//! cumulants, plus Fisher information and asymptotic intervals for TSS.

pub mod bell;
pub mod cgmm;
pub mod error;
mod fitting;
pub mod gmc;
pub mod gmm;
pub mod grid;
pub mod inference;
pub mod kernel;
pub mod likelihood;
pub mod moments;
pub mod optim;
pub mod regularize;
pub mod result;
pub mod start;

pub use bell::{bell_moment_conditions, model_raw_moments, raw_moments_from_cumulants};
pub use cgmm::{fit_cgmm, CgmmCriterion};
pub use error::{EstimateError, Result};
pub use gmc::fit_gmc;
pub use gmm::{default_grid_size, fit_gmm};
pub use grid::build_moment_grid;
pub use inference::{asymptotic_ci, coverage, fisher_information, ConfidenceInterval, FisherInfo};
pub use kernel::cgmm_kernel;
pub use likelihood::{fit_mle, log_likelihood, log_likelihood_with, Likelihood};
pub use moments::empirical_char_fn;
pub use optim::{minimize, OptimOptions, OptimResult};
pub use regularize::{regularized_inverse, RegularizationKind, RegularizationScheme};
pub use result::{EstimationResult, FitOptions, Method};
pub use start::starting_values;

use tempered_core::Family;

use result::scheme_or_default;

/// Fits `family` to `x` with `method`, filling unspecified tuning constants
/// with their defaults (GMM: Spectral cut-off, CGMM and GMC: Tikhonov).
pub fn fit(x: &[f64], family: Family, method: Method, opts: &FitOptions) -> Result<EstimationResult> {
    match method {
        Method::Mle => fit_mle(x, family, opts),
        Method::Gmm { r } => {
            let reg = RegularizationScheme::cutoff(RegularizationScheme::DEFAULT_GAMMA);
            fit_gmm(x, family, r.unwrap_or_else(|| default_grid_size(family)), &reg, opts)
        }
        Method::Cgmm { gamma, nodes } => {
            fit_cgmm(x, family, &scheme_or_default(RegularizationScheme::tikhonov, gamma), nodes.unwrap_or(cgmm::DEFAULT_NODES), opts)
        }
        Method::Gmc { p, gamma } => fit_gmc(x, family, p, &scheme_or_default(RegularizationScheme::tikhonov, gamma), opts),
    }
}
