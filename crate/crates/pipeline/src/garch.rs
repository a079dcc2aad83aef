//! GARCH(1,1) with zero conditional mean, fitted by Gaussian quasi-likelihood.

use serde::{Deserialize, Serialize};
use tempered_estimate::{minimize, OptimOptions};

use crate::error::{PipelineError, Result};

pub const MIN_OBS: usize = 100;
/// `a + b ≤ 1 − STATIONARITY_MARGIN`.
pub const STATIONARITY_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GarchFit {
    pub omega: f64,
    pub a: f64,
    pub b: f64,
    pub sigma: Vec<f64>,
    pub residuals: Vec<f64>,
    pub loglik: f64,
    pub converged: bool,
}

fn sample_variance(r: &[f64]) -> f64 {
    let n = r.len() as f64;
    let m = r.iter().sum::<f64>() / n;
    r.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n
}

/// Conditional standard deviations with `σ₁²` set to the sample variance.
pub fn garch_filter(r: &[f64], omega: f64, a: f64, b: f64) -> Vec<f64> {
    let mut var = sample_variance(r);
    let mut out = Vec::with_capacity(r.len());
    out.push(var.sqrt());
    for prev in &r[..r.len().saturating_sub(1)] {
        var = omega + a * prev * prev + b * var;
        out.push(var.sqrt());
    }
    out.truncate(r.len());
    out
}

/// Gaussian log-likelihood `−½ Σ (ln 2π + ln σ_t² + r_t²/σ_t²)`.
pub fn garch_loglik(r: &[f64], omega: f64, a: f64, b: f64) -> f64 {
    let ln2pi = (2.0 * std::f64::consts::PI).ln();
    garch_filter(r, omega, a, b).iter().zip(r).map(|(s, x)| -0.5 * (ln2pi + 2.0 * s.ln() + (x / s).powi(2))).sum()
}

/// Returns `σ_t z_t` with `σ₁²` at the stationary variance.
pub fn simulate_garch11(omega: f64, a: f64, b: f64, z: &[f64]) -> Vec<f64> {
    let mut var = omega / (1.0 - a - b);
    let mut out = Vec::with_capacity(z.len());
    for &e in z {
        let r = var.sqrt() * e;
        out.push(r);
        var = omega + a * r * r + b * var;
    }
    out
}

/// Maps `(ω/v, s, u)` to `(ω, a, b)` with `a = s·u`, `b = s(1−u)`, so that
/// the stationarity constraint becomes the box bound `s ≤ 1 − 1e-6`.
fn unpack(x: &[f64], v: f64) -> (f64, f64, f64) {
    (x[0] * v, x[1] * x[2], x[1] * (1.0 - x[2]))
}

pub fn fit_garch11(r: &[f64]) -> Result<GarchFit> {
    if r.len() < MIN_OBS {
        return Err(PipelineError::Invalid(format!("GARCH fit needs at least {MIN_OBS} returns, got {}", r.len())));
    }
    if r.iter().any(|x| !x.is_finite()) {
        return Err(PipelineError::Invalid("returns contain non-finite values".into()));
    }
    let v = sample_variance(r);
    if !(v > 0.0) {
        return Err(PipelineError::Invalid("returns have zero variance".into()));
    }
    let n = r.len() as f64;
    let objective = |x: &[f64]| {
        let (omega, a, b) = unpack(x, v);
        -garch_loglik(r, omega, a, b) / n
    };
    let lower = [1e-8, 0.0, 0.0];
    let upper = [10.0, 1.0 - STATIONARITY_MARGIN, 1.0];
    let opts = OptimOptions::default();
    let starts = [[0.05, 0.95, 0.1], [0.5, 0.5, 0.3], [1.0, 1e-3, 0.5]];
    let mut best: Option<tempered_estimate::OptimResult> = None;
    for s in &starts {
        let res = minimize(objective, s, &lower, &upper, &opts);
        if res.f.is_finite() && best.as_ref().is_none_or(|b| res.f < b.f) {
            best = Some(res);
        }
    }
    let Some(best) = best else {
        let (omega, a, b) = unpack(&starts[0], v);
        return Err(PipelineError::Garch { omega, a, b, message: "likelihood is not finite at any start".into() });
    };
    let (omega, a, b) = unpack(&best.x, v);
    if !best.converged {
        return Err(PipelineError::Garch { omega, a, b, message: best.message });
    }
    let sigma = garch_filter(r, omega, a, b);
    let residuals = r.iter().zip(&sigma).map(|(x, s)| x / s).collect();
    Ok(GarchFit { omega, a, b, sigma, residuals, loglik: -best.f * n, converged: best.converged })
}
