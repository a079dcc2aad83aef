//! Densities of tempered stable laws: the stable subordinator (series and
//! integral representations), TSS by exponential tilting, TS', FFT inversion
//! of characteristic functions for CTS/NTS, interpolation and distribution
//! functions.

pub mod cdf;
pub mod error;
pub mod fft;
pub mod model;
pub mod nts;
pub mod quad;
pub mod stable;
pub mod ts_prime;
pub mod tss;

pub use cdf::{cdf, model_grid, GridCdf};
pub use error::{DensityError, Result};
pub use fft::{invert_cf, pdf_interp, pdf_via_fft, DensityGrid, FftConfig};
pub use model::FamilyDensity;
pub use nts::{pdf_nts_mixture, NtsMixture};
pub use stable::{pdf_stable_subordinator, StableSubordinator};
pub use ts_prime::{pdf_ts_prime, skewed_stable_cf, TsPrimeDensity};
pub use tss::{pdf_tss, TssDensity};
