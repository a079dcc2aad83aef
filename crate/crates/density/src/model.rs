//! One density evaluator per parameter vector, picking the appropriate route.

use tempered_core::{ParamVector, Params};

use crate::error::Result;
use crate::fft::{pdf_via_fft, DensityGrid, FftConfig};
use crate::ts_prime::TsPrimeDensity;
use crate::tss::TssDensity;

#[derive(Debug, Clone)]
pub enum FamilyDensity {
    Tss(TssDensity),
    TsPrime(TsPrimeDensity),
    /// CTS and NTS: FFT grid with monotone cubic interpolation.
    Grid(DensityGrid),
}

impl FamilyDensity {
    pub fn new(theta: &Params, cfg: &FftConfig) -> Result<Self> {
        Ok(match theta {
            ParamVector::Tss(_) => FamilyDensity::Tss(TssDensity::new(theta)?),
            ParamVector::TsPrime(_) => FamilyDensity::TsPrime(TsPrimeDensity::new(theta)?),
            ParamVector::Cts(_) | ParamVector::Nts(_) => FamilyDensity::Grid(pdf_via_fft(theta, cfg)?),
        })
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        match self {
            FamilyDensity::Tss(d) => d.pdf(x),
            FamilyDensity::TsPrime(d) => d.pdf(x),
            FamilyDensity::Grid(g) => Ok(g.interp(x)),
        }
    }

    /// Log-density floored at `ln(floor)`.
    pub fn ln_pdf_floored(&self, x: f64, floor: f64) -> Result<f64> {
        let v = match self {
            FamilyDensity::Tss(d) => d.ln_pdf(x)?,
            FamilyDensity::TsPrime(d) => d.ln_pdf(x)?,
            FamilyDensity::Grid(g) => g.ln_interp(x),
        };
        Ok(v.max(floor.ln()))
    }
}
