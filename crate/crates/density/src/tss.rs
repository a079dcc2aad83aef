//! TSS density through exponential tilting of the stable subordinator:
//! `f_TSS(y) = exp(−λy − λ^α δ Γ(−α)) f_S(y)` for `y > 0`.

use tempered_core::special::gamma;
use tempered_core::{ParamVector, Params, TssParams};

use crate::error::{DensityError, Result};
use crate::stable::StableSubordinator;

#[derive(Debug, Clone)]
pub struct TssDensity {
    params: TssParams<f64>,
    stable: StableSubordinator,
    ln_norm: f64,
}

impl TssDensity {
    pub fn new(theta: &Params) -> Result<Self> {
        theta.validate()?;
        match *theta {
            ParamVector::Tss(p) => Self::from_params(p),
            _ => Err(DensityError::Unsupported(format!("TSS density requested for {}", theta.family()))),
        }
    }

    pub(crate) fn from_params(p: TssParams<f64>) -> Result<Self> {
        let stable = StableSubordinator::new(p.alpha, p.delta)?;
        let ln_norm = -p.lambda.powf(p.alpha) * p.delta * gamma(-p.alpha);
        Ok(Self { params: p, stable, ln_norm })
    }

    pub fn params(&self) -> TssParams<f64> {
        self.params
    }

    pub fn ln_pdf(&self, y: f64) -> Result<f64> {
        if y <= 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(self.ln_norm - self.params.lambda * y + self.stable.ln_pdf(y)?)
    }

    pub fn pdf(&self, y: f64) -> Result<f64> {
        if y <= 0.0 {
            return Ok(0.0);
        }
        self.ln_pdf(y).map(f64::exp)
    }

    /// Mode, located by golden-section search on the log-density.
    pub fn mode(&self) -> Result<f64> {
        let p = self.params;
        let mean = gamma(1.0 - p.alpha) * p.delta * p.lambda.powf(p.alpha - 1.0);
        let (mut lo, mut hi) = (mean * 1e-6, mean * 4.0);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = hi - g * (hi - lo);
        let mut d = lo + g * (hi - lo);
        let mut fc = self.ln_pdf(c)?;
        let mut fd = self.ln_pdf(d)?;
        for _ in 0..200 {
            if fc > fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - g * (hi - lo);
                fc = self.ln_pdf(c)?;
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + g * (hi - lo);
                fd = self.ln_pdf(d)?;
            }
            if hi - lo < 1e-10 * hi {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// `f_TSS(y; θ)`.
pub fn pdf_tss(theta: &Params, y: f64) -> Result<f64> {
    TssDensity::new(theta)?.pdf(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_half() {
        let theta = ParamVector::tss(0.5, 1.0, 1.0).unwrap();
        let v = pdf_tss(&theta, 1.0).unwrap();
        let expected = (2.0 * std::f64::consts::PI.sqrt() - 1.0 - std::f64::consts::PI).exp();
        assert!((v / expected - 1.0).abs() < 1e-12);
        assert_eq!(pdf_tss(&theta, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn wrong_family_rejected() {
        let theta = ParamVector::cts(1.5, 1.0, 1.0, 1.0, 1.0, 0.0).unwrap();
        assert!(TssDensity::new(&theta).is_err());
    }
}
