//! Density of the centered, totally positively skewed law `TS'(α, δ, λ)`.
//!
//! With `m = Γ(1−α)δλ^{α−1}`:
//! * `α < 1`: `f_TS'(y) = f_TSS(y + m)`;
//! * `α ∈ (1, 2)`: `f_TS'(y) = exp(−λ(y + m) − δΓ(−α)λ^α) f_S(y + m)` where
//!   `S` is the totally skewed stable law with characteristic function
//!   `exp(δΓ(−α)(−it)^α)`, whose density is obtained by FFT inversion.

use num_complex::Complex;
use tempered_core::special::gamma;
use tempered_core::{ParamVector, Params, TssParams, ALPHA_ONE_TOL};

use crate::error::{DensityError, Result};
use crate::fft::{decay_point, invert_cf, DensityGrid, FftConfig};
use crate::tss::TssDensity;

// stable ordinates below this fraction of the peak are treated as zero
const STABLE_NOISE: f64 = 1e-12;

#[derive(Debug, Clone)]
enum Inner {
    Shifted(TssDensity),
    Tilted { stable: DensityGrid, cutoff: f64, ln_norm: f64 },
}

#[derive(Debug, Clone)]
pub struct TsPrimeDensity {
    params: TssParams<f64>,
    shift: f64,
    inner: Inner,
}

/// Characteristic function of the totally positively skewed stable law with
/// Lévy measure `δ r^{−1−α} dr`, `α ∈ (1, 2)` (compensated, mean zero).
pub fn skewed_stable_cf(alpha: f64, delta: f64, t: f64) -> Complex<f64> {
    let base = Complex::new(0.0, -t);
    if t == 0.0 {
        return Complex::new(1.0, 0.0);
    }
    ((base.ln() * alpha).exp() * (delta * gamma(-alpha))).exp()
}

impl TsPrimeDensity {
    pub fn new(theta: &Params) -> Result<Self> {
        theta.validate()?;
        let p = match *theta {
            ParamVector::TsPrime(p) => p,
            _ => return Err(DensityError::Unsupported(format!("TS' density requested for {}", theta.family()))),
        };
        if (p.alpha - 1.0).abs() < ALPHA_ONE_TOL {
            return Err(DensityError::Unsupported("TS' density is not available at alpha = 1".into()));
        }
        let shift = gamma(1.0 - p.alpha) * p.delta * p.lambda.powf(p.alpha - 1.0);
        if p.alpha < 1.0 {
            return Ok(Self { params: p, shift, inner: Inner::Shifted(TssDensity::from_params(p)?) });
        }
        let ln_norm = -p.lambda * shift - p.delta * gamma(-p.alpha) * p.lambda.powf(p.alpha);
        // window of the TS' law, expressed in the stable variable y + m
        let sd = (gamma(2.0 - p.alpha) * p.delta * p.lambda.powf(p.alpha - 2.0)).sqrt();
        let lo = shift - 12.0 * sd;
        let hi = shift + 12.0 * sd + 40.0 / p.lambda;
        let center = 0.5 * (lo + hi);
        // The stable law has a heavy right tail; its mass beyond the grid wraps
        // around and is amplified by the tilt on the left, so the grid is wide
        // and fine (explicit t_max, no window shrinking).
        let (a, d) = (p.alpha, p.delta);
        let cf = move |t: f64| skewed_stable_cf(a, d, t);
        let t_max = 8.0 * decay_point(&cf)?;
        let mut cfg = FftConfig {
            n_points: 1 << 18,
            t_max: Some(t_max),
            tail_mass_tol: 5e-5,
            max_points: 1 << 21,
            ..FftConfig::default()
        };
        let stable = loop {
            let g = invert_cf(cf, center, &cfg)?;
            if g.x0 <= lo && g.x_max() >= hi {
                break g;
            }
            if cfg.n_points * 2 > cfg.max_points {
                return Err(DensityError::Config("stable grid cannot span the TS' support window".into()));
            }
            cfg.n_points *= 2;
        };
        let peak = stable.values.iter().fold(0.0f64, |m, &v| m.max(v));
        // the far left of the grid carries only wrapped-around tail mass
        let noise = stable.values[..stable.len() / 16].iter().fold(0.0f64, |m, &v| m.max(v));
        let cutoff = (STABLE_NOISE * peak).max(10.0 * noise);
        Ok(Self { params: p, shift, inner: Inner::Tilted { stable, cutoff, ln_norm } })
    }

    pub fn params(&self) -> TssParams<f64> {
        self.params
    }

    /// `Γ(1−α)δλ^{α−1}`.
    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn pdf(&self, y: f64) -> Result<f64> {
        match &self.inner {
            Inner::Shifted(tss) => tss.pdf(y + self.shift),
            Inner::Tilted { stable, cutoff, ln_norm } => {
                let x = y + self.shift;
                let fs = stable.interp(x);
                if fs < *cutoff {
                    return Ok(0.0);
                }
                Ok((ln_norm - self.params.lambda * y).exp() * fs)
            }
        }
    }

    pub fn ln_pdf(&self, y: f64) -> Result<f64> {
        match &self.inner {
            Inner::Shifted(tss) => tss.ln_pdf(y + self.shift),
            Inner::Tilted { .. } => self.pdf(y).map(f64::ln),
        }
    }
}

/// `f_TS'(y; θ)`.
pub fn pdf_ts_prime(theta: &Params, y: f64) -> Result<f64> {
    TsPrimeDensity::new(theta)?.pdf(y)
}
