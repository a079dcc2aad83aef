//! Goodness-of-fit statistics and QQ pairs.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::FittedModel;

/// CDF values are clipped to `[CDF_CLIP, 1 − CDF_CLIP]` before logarithms.
pub const CDF_CLIP: f64 = 1e-12;
/// Density floor in the log-likelihood.
pub const DENSITY_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub ks: f64,
    pub ad: f64,
    pub aic: f64,
    pub bic: f64,
    pub loglik: f64,
    pub n: usize,
    pub k_params: usize,
}

impl GofReport {
    /// Builds the report from sorted CDF values `F(x_(i))`.
    pub fn from_cdf_values(u: &[f64], loglik: f64, k_params: usize) -> Self {
        let n = u.len();
        let nf = n as f64;
        let k = k_params as f64;
        Self { ks: ks_statistic(u), ad: ad_statistic(u), aic: 2.0 * k - 2.0 * loglik, bic: k * nf.ln() - 2.0 * loglik, loglik, n, k_params }
    }
}

/// `sup_x |F_n(x) − F(x)|` from sorted `F(x_(i))`.
pub fn ks_statistic(u: &[f64]) -> f64 {
    let n = u.len() as f64;
    u.iter().enumerate().fold(0.0, |m, (i, &f)| m.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n))
}

/// `−n − n⁻¹ Σ (2i−1)[ln F(x_(i)) + ln(1 − F(x_(n+1−i)))]` from sorted `F(x_(i))`.
pub fn ad_statistic(u: &[f64]) -> f64 {
    let n = u.len();
    let clip = |v: f64| v.clamp(CDF_CLIP, 1.0 - CDF_CLIP);
    let s: f64 = (0..n).map(|i| (2 * i + 1) as f64 * (clip(u[i]).ln() + (1.0 - clip(u[n - 1 - i])).ln())).sum();
    -(n as f64) - s / n as f64
}

fn sorted(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

pub fn gof_report(x: &[f64], model: &FittedModel) -> GofReport {
    let xs = sorted(x);
    let u: Vec<f64> = xs.iter().map(|&v| model.cdf(v)).collect();
    let loglik = xs.iter().map(|&v| model.pdf(v).max(DENSITY_FLOOR).ln()).sum();
    GofReport::from_cdf_values(&u, loglik, model.k_params())
}

/// `(x_(i), q((i − 0.5)/n))` pairs for a quantile function `q`.
pub fn qq_pairs(x: &[f64], quantile: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    let n = x.len() as f64;
    sorted(x).into_iter().enumerate().map(|(i, v)| (v, quantile((i as f64 + 0.5) / n))).collect()
}

pub fn qq_data(x: &[f64], model: &FittedModel) -> Vec<(f64, f64)> {
    qq_pairs(x, |p| model.quantile(p))
}

/// Writes `model,empirical,theoretical` rows.
pub fn write_qq_csv<W: Write>(writer: W, series: &[(String, Vec<(f64, f64)>)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["model", "empirical", "theoretical"])?;
    for (name, pairs) in series {
        for (e, q) in pairs {
            w.write_record([name.clone(), format!("{e}"), format!("{q}")])?;
        }
    }
    w.flush()?;
    Ok(())
}
