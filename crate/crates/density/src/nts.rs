//! NTS density as a normal variance-mean mixture over the TSS law,
//! `f(z) = ∫₀^∞ φ(z; μ + βy, y) f_TSS(y) dy`. Slow; used as a reference.

use tempered_core::{ParamVector, Params};

use crate::error::{DensityError, Result};
use crate::quad::{integrate, QuadOptions};
use crate::tss::TssDensity;

pub struct NtsMixture {
    beta: f64,
    mu: f64,
    tss: TssDensity,
}

impl NtsMixture {
    pub fn new(theta: &Params) -> Result<Self> {
        theta.validate()?;
        match *theta {
            ParamVector::Nts(p) => {
                let tss = TssDensity::new(&ParamVector::tss(p.alpha, p.delta, p.lambda)?)?;
                Ok(Self { beta: p.beta, mu: p.mu, tss })
            }
            _ => Err(DensityError::Unsupported(format!("NTS mixture requested for {}", theta.family()))),
        }
    }

    pub fn pdf(&self, z: f64) -> Result<f64> {
        let half_ln_2pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
        let mode = self.tss.mode()?;
        let mut err = None;
        let integrand = |s: f64| -> f64 {
            // y = s / (1 − s) maps [0, 1) onto [0, ∞)
            let om = 1.0 - s;
            let y = s / om;
            if y <= 0.0 || !y.is_finite() {
                return 0.0;
            }
            let ln_f = match self.tss.ln_pdf(y) {
                Ok(v) => v,
                Err(e) => {
                    err.get_or_insert(e);
                    return 0.0;
                }
            };
            let r = z - self.mu - self.beta * y;
            let ln_n = -half_ln_2pi - 0.5 * y.ln() - 0.5 * r * r / y;
            (ln_n + ln_f).exp() / (om * om)
        };
        let sm = mode / (1.0 + mode);
        let breaks = [0.25 * sm, 0.5 * sm, sm, 0.5 * (1.0 + sm), 0.99];
        let opts = QuadOptions { abs_tol: 1e-14, rel_tol: 1e-10, max_intervals: 2000 };
        let v = integrate(integrand, 0.0, 1.0, &breaks, &opts)?;
        if let Some(e) = err {
            return Err(e);
        }
        Ok(v)
    }
}

/// NTS density by the mixture integral.
pub fn pdf_nts_mixture(theta: &Params, z: f64) -> Result<f64> {
    NtsMixture::new(theta)?.pdf(z)
}
