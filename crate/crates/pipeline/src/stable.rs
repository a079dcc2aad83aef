//! Four-parameter stable law used as the heavy-tailed baseline.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use tempered_estimate::{CgmmCriterion, OptimOptions, RegularizationScheme};

use crate::error::{PipelineError, Result};

/// `S(α, β, σ, μ)` with `ln φ(t) = −σ^α|t|^α(1 − iβ sgn(t) tan(πα/2)) + iμt`
/// (and the logarithmic form at `α = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableParams {
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
    pub mu: f64,
}

impl StableParams {
    pub fn new(alpha: f64, beta: f64, sigma: f64, mu: f64) -> Result<Self> {
        let p = Self { alpha, beta, sigma, mu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 2.0) || !(self.beta.abs() <= 1.0) || !(self.sigma > 0.0) || !self.mu.is_finite() {
            return Err(PipelineError::Invalid(format!("invalid stable parameters {self:?}")));
        }
        Ok(())
    }

    pub fn values(&self) -> [f64; 4] {
        [self.alpha, self.beta, self.sigma, self.mu]
    }

    pub fn cf(&self, t: f64) -> Complex<f64> {
        stable_cf(self.alpha, self.beta, self.sigma, self.mu, t)
    }
}

pub fn stable_cf(alpha: f64, beta: f64, sigma: f64, mu: f64, t: f64) -> Complex<f64> {
    if t == 0.0 {
        return Complex::new(1.0, 0.0);
    }
    let at = (sigma * t.abs()).powf(alpha);
    let skew = if (alpha - 1.0).abs() < 1e-8 {
        -beta * t.signum() * std::f64::consts::FRAC_2_PI * (sigma * t.abs()).ln()
    } else {
        beta * t.signum() * (std::f64::consts::FRAC_PI_2 * alpha).tan()
    };
    let mut log = Complex::new(-at, at * skew + mu * t);
    if (alpha - 1.0).abs() < 1e-8 {
        log = Complex::new(-sigma * t.abs(), sigma * t.abs() * skew + mu * t);
    }
    log.exp()
}

/// CGMM fit of the stable law on a sample centred at its median.
pub fn fit_stable(x: &[f64], reg: &RegularizationScheme, nodes: usize, optim: &OptimOptions) -> Result<StableParams> {
    if x.len() < 4 {
        return Err(PipelineError::Invalid("stable fit needs at least four observations".into()));
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let med = sorted[sorted.len() / 2];
    let xc: Vec<f64> = x.iter().map(|v| v - med).collect();
    let q = |p: f64| sorted[((p * (sorted.len() - 1) as f64).round()) as usize];
    // interquartile range of S(α≈1.7) is roughly 2.2σ
    let scale = ((q(0.75) - q(0.25)) / 2.2).max(1e-6);
    let crit = CgmmCriterion::new(&xc, reg, nodes)?;
    let cf = |v: &[f64], t: f64| Some(stable_cf(v[0], v[1], v[2], v[3], t));
    let starts = vec![vec![1.7, 0.0, scale, 0.0], vec![1.95, 0.0, scale, 0.0], vec![1.3, 0.0, scale, 0.0]];
    let lower = [1e-6, -1.0, 1e-6, f64::NEG_INFINITY];
    let upper = [2.0, 1.0, f64::INFINITY, f64::INFINITY];
    let best = crit
        .minimize(cf, &starts, &lower, &upper, optim)
        .ok_or_else(|| PipelineError::Invalid("stable CGMM objective is not finite at any start".into()))?;
    StableParams::new(best.x[0], best.x[1], best.x[2], best.x[3] + med)
}
