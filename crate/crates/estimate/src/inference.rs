//! Fisher information of the TSS law and asymptotic confidence intervals.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use tempered_core::{Family, ParamVector, Params};
use tempered_density::quad::{integrate_vec, QuadOptions};
use tempered_density::{model_grid, FftConfig, GridCdf, TssDensity};

use crate::error::{EstimateError, Result};

/// Relative step of the central-difference score.
pub const SCORE_STEP: f64 = 1e-5;
/// Upper integration limit as a quantile of the law.
pub const UPPER_QUANTILE: f64 = 0.99999;

#[derive(Debug, Clone, PartialEq)]
pub struct FisherInfo {
    pub theta: Params,
    pub matrix: DMatrix<f64>,
    /// Ratio of the largest to the smallest eigenvalue (∞ if not positive definite).
    pub condition_number: f64,
}

impl FisherInfo {
    pub fn from_matrix(theta: Params, matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != theta.dim() || matrix.ncols() != theta.dim() {
            return Err(EstimateError::InvalidArgument(format!("information matrix must be {0}×{0}", theta.dim())));
        }
        let eig = SymmetricEigen::new(matrix.clone()).eigenvalues;
        let (lo, hi) = eig.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v.abs())));
        let condition_number = if lo > 0.0 { hi / lo } else { f64::INFINITY };
        Ok(Self { theta, matrix, condition_number })
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut e: Vec<f64> = SymmetricEigen::new(self.matrix.clone()).eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    pub fn inverse(&self) -> Result<DMatrix<f64>> {
        if !self.condition_number.is_finite() {
            return Err(EstimateError::Singular("Fisher information is not positive definite".into()));
        }
        self.matrix
            .clone()
            .cholesky()
            .map(|c| c.inverse())
            .ok_or_else(|| EstimateError::Singular("Cholesky factorisation of the Fisher information failed".into()))
    }
}

fn tss_only(theta: &Params) -> Result<()> {
    theta.validate()?;
    if theta.family() != Family::Tss {
        return Err(EstimateError::Unsupported { method: "Fisher information", family: theta.family() });
    }
    Ok(())
}

/// Integration range `(0, q)` with `q` the upper quantile, and the mode.
pub(crate) fn tss_range(theta: &Params) -> Result<(f64, f64)> {
    let cdf = GridCdf::from_grid(&model_grid(theta, &FftConfig::default())?);
    let mode = TssDensity::new(theta)?.mode()?;
    Ok((cdf.quantile(UPPER_QUANTILE), mode))
}

/// Densities at `θ ± h_k e_k` and the steps `h_k`.
pub(crate) fn perturbed(theta: &Params) -> Result<(Vec<(TssDensity, TssDensity)>, Vec<f64>)> {
    let v = theta.values();
    let mut out = Vec::with_capacity(v.len());
    let mut steps = Vec::with_capacity(v.len());
    for k in 0..v.len() {
        let h = SCORE_STEP * v[k].abs().max(SCORE_STEP);
        let (mut up, mut down) = (v.clone(), v.clone());
        up[k] += h;
        down[k] -= h;
        let up = TssDensity::new(&ParamVector::new(Family::Tss, &up)?)?;
        let down = TssDensity::new(&ParamVector::new(Family::Tss, &down)?)?;
        out.push((up, down));
        steps.push(h);
    }
    Ok((out, steps))
}

/// `I(θ) = ∫ s sᵀ f dx` over `(0, q₀.₉₉₉₉₉)` with the score `s` by central
/// differences of `ln f`.
pub fn fisher_information(theta: &Params) -> Result<FisherInfo> {
    tss_only(theta)?;
    let d = theta.dim();
    let base = TssDensity::new(theta)?;
    let (pairs, steps) = perturbed(theta)?;
    let (upper, mode) = tss_range(theta)?;
    let mut score = vec![0.0; d];
    let mut failed = None;
    let integrand = |x: f64, out: &mut [f64]| {
        out.fill(0.0);
        let f = match base.pdf(x) {
            Ok(f) if f > 0.0 && f.is_finite() => f,
            Ok(_) => return,
            Err(e) => {
                failed.get_or_insert(e);
                return;
            }
        };
        for k in 0..d {
            let (up, down) = &pairs[k];
            let s = match (up.ln_pdf(x), down.ln_pdf(x)) {
                (Ok(a), Ok(b)) => (a - b) / (2.0 * steps[k]),
                (Err(e), _) | (_, Err(e)) => {
                    failed.get_or_insert(e);
                    return;
                }
            };
            score[k] = if s.is_finite() { s } else { 0.0 };
        }
        let mut idx = 0;
        for i in 0..d {
            for j in i..d {
                out[idx] = score[i] * score[j] * f;
                idx += 1;
            }
        }
    };
    let opts = QuadOptions { abs_tol: 1e-10, rel_tol: 1e-8, max_intervals: 4000 };
    let q = integrate_vec(integrand, d * (d + 1) / 2, 0.0, upper, &[mode], &opts)?;
    if let Some(e) = failed {
        return Err(e.into());
    }
    let mut m = DMatrix::zeros(d, d);
    let mut idx = 0;
    for i in 0..d {
        for j in i..d {
            m[(i, j)] = q.value[idx];
            m[(j, i)] = q.value[idx];
            idx += 1;
        }
    }
    FisherInfo::from_matrix(*theta, m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub level: f64,
}

impl ConfidenceInterval {
    /// Componentwise `lower_k ≤ θ_k ≤ upper_k`.
    pub fn contains(&self, theta: &[f64]) -> Vec<bool> {
        theta.iter().zip(self.lower.iter().zip(&self.upper)).map(|(v, (lo, hi))| lo <= v && v <= hi).collect()
    }

    pub fn half_widths(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(lo, hi)| 0.5 * (hi - lo)).collect()
    }
}

/// `θ̂_k ± z_{(1+level)/2} · sqrt((I⁻¹)_kk / n)`.
pub fn asymptotic_ci(theta_hat: &[f64], info: &FisherInfo, n: usize, level: f64) -> Result<ConfidenceInterval> {
    if !(level > 0.0 && level < 1.0) {
        return Err(EstimateError::InvalidArgument(format!("confidence level {level} is not in (0, 1)")));
    }
    if n == 0 {
        return Err(EstimateError::SampleTooSmall { n, needed: 1 });
    }
    if theta_hat.len() != info.matrix.nrows() {
        return Err(EstimateError::InvalidArgument("estimate and information dimensions differ".into()));
    }
    let inv = info.inverse()?;
    let z = Normal::standard().inverse_cdf(0.5 * (1.0 + level));
    let half: Vec<f64> = (0..theta_hat.len()).map(|k| z * (inv[(k, k)] / n as f64).sqrt()).collect();
    Ok(ConfidenceInterval {
        lower: theta_hat.iter().zip(&half).map(|(t, h)| t - h).collect(),
        upper: theta_hat.iter().zip(&half).map(|(t, h)| t + h).collect(),
        level,
    })
}

/// Fraction of intervals containing `θ₀`, per component. Empty input gives NaN.
pub fn coverage(intervals: &[ConfidenceInterval], theta0: &[f64]) -> Vec<f64> {
    let mut hits = vec![0usize; theta0.len()];
    for ci in intervals {
        for (h, inside) in hits.iter_mut().zip(ci.contains(theta0)) {
            *h += inside as usize;
        }
    }
    hits.iter().map(|&h| h as f64 / intervals.len() as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_information_half_width() {
        let theta = ParamVector::tss(0.5, 1.0, 1.0).unwrap();
        let info = FisherInfo::from_matrix(theta, DMatrix::identity(3, 3)).unwrap();
        let ci = asymptotic_ci(&[0.5, 1.0, 1.0], &info, 100, 0.95).unwrap();
        for h in ci.half_widths() {
            assert!((h - 0.1959964).abs() < 1e-6);
        }
        let wide = asymptotic_ci(&[0.5, 1.0, 1.0], &info, 1000, 0.95).unwrap();
        for (a, b) in ci.half_widths().iter().zip(wide.half_widths()) {
            assert!((a / b - 10f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn coverage_extremes() {
        let all = ConfidenceInterval { lower: vec![-1e300; 2], upper: vec![1e300; 2], level: 0.95 };
        let none = ConfidenceInterval { lower: vec![5.0; 2], upper: vec![6.0; 2], level: 0.95 };
        assert_eq!(coverage(&[all.clone(), all], &[0.0, 1.0]), vec![1.0, 1.0]);
        assert_eq!(coverage(&[none], &[0.0, 1.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn singular_information_is_rejected() {
        let theta = ParamVector::tss(0.5, 1.0, 1.0).unwrap();
        let info = FisherInfo::from_matrix(theta, DMatrix::zeros(3, 3)).unwrap();
        assert!(matches!(asymptotic_ci(&[0.5, 1.0, 1.0], &info, 10, 0.9), Err(EstimateError::Singular(_))));
    }
}
