//! Density of the one-sided stable law `S(α, δ)`, `α ∈ (0, 1)`, whose Lévy
//! measure is `δ r^{−1−α} dr` on `(0, ∞)`.
//!
//! With `c = δΓ(1−α)/α` the Laplace transform is `exp(−c s^α)`, so
//! `S = c^{1/α} S₁` where `S₁` has Laplace transform `exp(−s^α)`. For `S₁`
//! two representations are used:
//!
//! * the convergent large-`x` series
//!   `f₁(x) = (πx)^{−1} Σ_{k≥1} (−1)^{k+1} Γ(1+αk)/k! · x^{−αk} sin(απk)`;
//! * the integral representation
//!   `f₁(x) = α/(1−α) · x^{−1/(1−α)} π^{−1} ∫₀^π A(u) exp(−x^{−α/(1−α)} A(u)) du`,
//!   `A(u) = (sin αu / sin u)^{1/(1−α)} · sin((1−α)u) / sin αu`.
//!
//! The series is summed while its cancellation ratio `Σ|t_k| / |Σ t_k|`
//! stays small; otherwise, and for small `x` where the terms grow before
//! they decay, the integral is evaluated in log form.

use std::f64::consts::PI;

use tempered_core::special::{gamma, ln_gamma};

use crate::error::{DensityError, Result};
use crate::quad::{integrate, QuadOptions};

const MAX_TERMS: usize = 400;
// beyond this z = x^{−α} the series is not attempted
const SERIES_Z_MAX: f64 = 8.0;
const MAX_CANCELLATION: f64 = 1e3;

#[derive(Debug, Clone)]
pub struct StableSubordinator {
    alpha: f64,
    delta: f64,
    scale: f64,
    ln_scale: f64,
    // ln(Γ(1+αk)/k!) and sin(απk), index k-1
    ln_coef: Vec<f64>,
    sin_k: Vec<f64>,
}

/// Which representation produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Series,
    Integral,
}

impl StableSubordinator {
    pub fn new(alpha: f64, delta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(tempered_core::Error::InvalidArgument(format!(
                "stable subordinator index alpha = {alpha} must lie in (0, 1)"
            ))
            .into());
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(tempered_core::Error::InvalidArgument(format!(
                "stable subordinator scale delta = {delta} must be positive"
            ))
            .into());
        }
        let c = delta * gamma(1.0 - alpha) / alpha;
        let ln_scale = c.ln() / alpha;
        let mut ln_coef = Vec::with_capacity(MAX_TERMS);
        let mut sin_k = Vec::with_capacity(MAX_TERMS);
        for k in 1..=MAX_TERMS {
            let kf = k as f64;
            ln_coef.push(ln_gamma(1.0 + alpha * kf) - ln_gamma(kf + 1.0));
            let frac = (alpha * kf) % 2.0;
            sin_k.push((PI * frac).sin());
        }
        Ok(Self { alpha, delta, scale: ln_scale.exp(), ln_scale, ln_coef, sin_k })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `c^{1/α}`, the scale relating `S(α, δ)` to the standard law.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn pdf(&self, y: f64) -> Result<f64> {
        if y <= 0.0 {
            return Ok(0.0);
        }
        self.ln_pdf(y).map(f64::exp)
    }

    pub fn ln_pdf(&self, y: f64) -> Result<f64> {
        self.ln_pdf_with_route(y).map(|(v, _)| v)
    }

    /// Log-density together with the representation that was used.
    pub fn ln_pdf_with_route(&self, y: f64) -> Result<(f64, Route)> {
        if y.is_nan() {
            return Err(tempered_core::Error::InvalidArgument("y is NaN".into()).into());
        }
        if y <= 0.0 {
            return Ok((f64::NEG_INFINITY, Route::Series));
        }
        if y == f64::INFINITY {
            return Ok((f64::NEG_INFINITY, Route::Series));
        }
        let ln_x = y.ln() - self.ln_scale;
        let ln_z = -self.alpha * ln_x;
        if ln_z <= SERIES_Z_MAX.ln() {
            if let Some(v) = self.ln_series(ln_x, ln_z) {
                return Ok((v - self.ln_scale, Route::Series));
            }
        }
        let v = self.ln_integral(ln_x, y)?;
        Ok((v - self.ln_scale, Route::Integral))
    }

    /// Large-`x` series for `ln f₁(x)`; `None` when cancellation is too strong
    /// or the terms have not decayed within the term budget.
    fn ln_series(&self, ln_x: f64, ln_z: f64) -> Option<f64> {
        let mut sum = 0.0f64;
        let mut sum_abs = 0.0f64;
        let mut prev = f64::INFINITY;
        for k in 0..MAX_TERMS {
            let kf = (k + 1) as f64;
            let mag = (self.ln_coef[k] + kf * ln_z).exp();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let t = sign * mag * self.sin_k[k];
            sum += t;
            sum_abs += t.abs();
            if mag < prev && k >= 1 && mag <= 1e-17 * sum.abs().max(f64::MIN_POSITIVE) {
                if !(sum > 0.0) || sum_abs > MAX_CANCELLATION * sum {
                    return None;
                }
                return Some(sum.ln() - PI.ln() - ln_x);
            }
            prev = mag;
        }
        None
    }

    /// Integral representation for `ln f₁(x)`, factoring out `exp(−L·A(0⁺))`.
    fn ln_integral(&self, ln_x: f64, y: f64) -> Result<f64> {
        let a = self.alpha;
        let rho = 1.0 / (1.0 - a);
        let ln_l = -a * rho * ln_x;
        let l = ln_l.exp();
        if !l.is_finite() {
            // exp(−L·A(0⁺)) underflows long before L overflows
            return Ok(f64::NEG_INFINITY);
        }
        let a0 = (1.0 - a) * (a * rho * a.ln()).exp();
        // Δ(u) = ln A(u) − ln A(0⁺), assembled from ln(sin x / x) so that the
        // small-u cancellation is exact
        let delta = |u: f64| -> f64 { rho * (ln_sinc(a * u) - ln_sinc(u)) + ln_sinc((1.0 - a) * u) - ln_sinc(a * u) };
        let integrand = |u: f64| -> f64 {
            let d = delta(u);
            let e = d - l * a0 * d.exp_m1();
            if e.is_nan() {
                0.0
            } else {
                e.exp()
            }
        };
        let w = (1.0 / l.sqrt()).min(1.0);
        let mut breaks = Vec::new();
        let mut b = w;
        while b < PI {
            breaks.push(b);
            b *= 4.0;
        }
        let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-11, max_intervals: 500 };
        let value = integrate(integrand, 0.0, PI, &breaks, &opts).map_err(|e| match e {
            DensityError::Quadrature { value, error, .. } => DensityError::Series {
                y,
                terms: MAX_TERMS,
                ratio: error / value.max(f64::MIN_POSITIVE),
                reason: "neither series nor integral representation converged",
            },
            other => other,
        })?;
        if !(value > 0.0) {
            return Err(DensityError::Series { y, terms: 0, ratio: f64::NAN, reason: "integral representation vanished" });
        }
        Ok((a * rho / PI).ln() + a0.ln() - rho * ln_x - l * a0 + value.ln())
    }
}

const LN_SINC: [f64; 9] = [
    -1.0 / 6.0,
    -1.0 / 180.0,
    -1.0 / 2835.0,
    -1.0 / 37800.0,
    -1.0 / 467775.0,
    -691.0 / 3831077250.0,
    -2.0 / 127702575.0,
    -3617.0 / 2605132530000.0,
    -43867.0 / 350813659321125.0,
];

/// `ln(sin x / x)` for `x ∈ [0, π)`, accurate near zero.
fn ln_sinc(x: f64) -> f64 {
    if x < 0.5 {
        let x2 = x * x;
        let mut acc = 0.0;
        for &c in LN_SINC.iter().rev() {
            acc = acc * x2 + c;
        }
        acc * x2
    } else {
        (x.sin() / x).ln()
    }
}

/// Density of `S(α, δ)` at `y`; zero for `y ≤ 0`.
pub fn pdf_stable_subordinator(alpha: f64, delta: f64, y: f64) -> Result<f64> {
    StableSubordinator::new(alpha, delta)?.pdf(y)
}
