//! Density grids by FFT inversion of a characteristic function,
//! `f(x) = (2π)^{−1} ∫ e^{−itx} φ(t) dt`, and monotone cubic interpolation on
//! the resulting equispaced grid.
//!
//! With `t_j = −T + j·dt`, `dt = 2T/N` and `x_k = x₀ + k·dx`, `dx = π/T`,
//! the Riemann sum becomes
//! `f(x_k) ≈ (dt/2π) e^{iT x₀} (−1)^k DFT_k[e^{−i j dt x₀} φ(t_j)]`.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use tempered_core::{mean_variance, Params};

use crate::error::{DensityError, Result};

/// `|φ|` must be below this beyond the frequency cut-off.
pub const CF_DECAY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FftConfig {
    /// Initial number of grid points (power of two, at least 2^10).
    pub n_points: usize,
    /// Frequency truncation `T`; chosen adaptively when `None`.
    pub t_max: Option<f64>,
    /// Floor applied to the inverted density (negative ripples, far tails).
    pub clip_floor: f64,
    /// Largest probability tolerated in each outer sixteenth of the grid.
    pub tail_mass_tol: f64,
    /// Upper limit for `n_points` when the grid is widened to cover the mass.
    pub max_points: usize,
    /// Largest factor by which an adaptive `T` may be raised above the decay
    /// point to refine `dx`, as long as the mass stays covered.
    pub max_oversample: u32,
}

impl Default for FftConfig {
    fn default() -> Self {
        Self {
            n_points: 1 << 13,
            t_max: None,
            clip_floor: 1e-15,
            tail_mass_tol: 1e-7,
            max_points: 1 << 20,
            max_oversample: 1 << 10,
        }
    }
}

impl FftConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.n_points.is_power_of_two() || self.n_points < (1 << 10) {
            return Err(DensityError::Config(format!("n_points = {} must be a power of two >= 1024", self.n_points)));
        }
        if !(self.clip_floor > 0.0) {
            return Err(DensityError::Config("clip_floor must be positive".into()));
        }
        if let Some(t) = self.t_max {
            if !(t > 0.0 && t.is_finite()) {
                return Err(DensityError::Config(format!("t_max = {t} must be positive and finite")));
            }
        }
        if !(self.tail_mass_tol > 0.0) {
            return Err(DensityError::Config("tail_mass_tol must be positive".into()));
        }
        Ok(())
    }
}

/// Equispaced density ordinates with a monotone cubic (PCHIP) interpolant.
#[derive(Debug, Clone)]
pub struct DensityGrid {
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<f64>,
    /// `dx · Σ values` before renormalisation.
    pub total_mass: f64,
    pub clip_floor: f64,
    slopes: Vec<f64>,
}

fn pchip_end(d0: f64, d1: f64) -> f64 {
    let s = 0.5 * (3.0 * d0 - d1);
    if s.signum() != d0.signum() || d0 == 0.0 {
        0.0
    } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}

impl DensityGrid {
    /// Builds a grid from raw ordinates: values are floored at `clip_floor`,
    /// the pre-normalisation mass is recorded and the grid is rescaled to
    /// unit mass.
    pub fn from_raw(x0: f64, dx: f64, raw: &[f64], clip_floor: f64) -> Self {
        let mut values: Vec<f64> = raw.iter().map(|&v| if v > clip_floor { v } else { clip_floor }).collect();
        let total_mass = dx * values.iter().sum::<f64>();
        for v in values.iter_mut() {
            *v /= total_mass;
        }
        Self::from_values(x0, dx, values, total_mass, clip_floor)
    }

    /// Wraps ordinates as given (no clipping or rescaling).
    pub fn from_values(x0: f64, dx: f64, values: Vec<f64>, total_mass: f64, clip_floor: f64) -> Self {
        assert!(values.len() >= 2, "a density grid needs at least two nodes");
        let n = values.len();
        let delta: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]) / dx).collect();
        let mut slopes = vec![0.0; n];
        if n == 2 {
            slopes[0] = delta[0];
            slopes[1] = delta[0];
        } else {
            for k in 1..n - 1 {
                let (a, b) = (delta[k - 1], delta[k]);
                slopes[k] = if a * b <= 0.0 { 0.0 } else { 2.0 / (1.0 / a + 1.0 / b) };
            }
            slopes[0] = pchip_end(delta[0], delta[1]);
            slopes[n - 1] = pchip_end(delta[n - 2], delta[n - 3]);
        }
        Self { x0, dx, values, total_mass, clip_floor, slopes }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x0 + k as f64 * self.dx
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.values.len() - 1)
    }

    /// `(x_k, f_k)` pairs.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().map(move |(k, &v)| (self.x(k), v))
    }

    /// Monotone cubic interpolation; `clip_floor` outside the grid.
    pub fn interp(&self, x: f64) -> f64 {
        let n = self.values.len();
        let s = (x - self.x0) / self.dx;
        if !(s >= 0.0 && s <= (n - 1) as f64) {
            return self.clip_floor;
        }
        let r = s.round();
        if (s - r).abs() < 1e-9 {
            return self.values[r as usize].max(self.clip_floor);
        }
        let k = (s.floor() as usize).min(n - 2);
        let t = s - k as f64;
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (m0, m1) = (self.slopes[k] * self.dx, self.slopes[k + 1] * self.dx);
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1;
        v.max(self.clip_floor)
    }

    pub fn ln_interp(&self, x: f64) -> f64 {
        self.interp(x).ln()
    }

    /// Mean of the grid density (Riemann sum).
    pub fn mean(&self) -> f64 {
        self.dx * self.nodes().map(|(x, f)| x * f).sum::<f64>()
    }

    /// Mass `dx · Σ values` of the stored (normalised) ordinates.
    pub fn mass(&self) -> f64 {
        self.dx * self.values.iter().sum::<f64>()
    }
}

/// Monotone cubic interpolation of `grid` at `x`.
pub fn pdf_interp(grid: &DensityGrid, x: f64) -> f64 {
    grid.interp(x)
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n))
}

/// Smallest power of two `t` with `|φ|` below [`CF_DECAY`] at `t`, `1.5t`, `2t`.
pub fn decay_point<F: Fn(f64) -> Complex<f64>>(cf: &F) -> Result<f64> {
    let mut t = 2f64.powi(-10);
    while t <= 2f64.powi(24) {
        if [t, 1.5 * t, 2.0 * t].iter().all(|&s| cf(s).norm() < CF_DECAY) {
            return Ok(t);
        }
        t *= 2.0;
    }
    Err(DensityError::Config("characteristic function does not decay below 1e-12 for |t| <= 2^25".into()))
}

struct RawGrid {
    x0: f64,
    dx: f64,
    values: Vec<f64>,
    covered: bool,
}

// abscissae cutting off `tail` probability on either side of a raw grid
fn mass_window(raw: &RawGrid, tail: f64) -> (f64, f64) {
    let pos: Vec<f64> = raw.values.iter().map(|v| v.max(0.0)).collect();
    let total: f64 = pos.iter().sum();
    let n = pos.len();
    let mut acc = 0.0;
    let mut lo = 0;
    while lo < n - 1 && acc + pos[lo] < tail * total {
        acc += pos[lo];
        lo += 1;
    }
    acc = 0.0;
    let mut hi = n - 1;
    while hi > lo && acc + pos[hi] < tail * total {
        acc += pos[hi];
        hi -= 1;
    }
    (raw.x0 + lo as f64 * raw.dx, raw.x0 + hi as f64 * raw.dx)
}

fn raw_inversion<F: Fn(f64) -> Complex<f64>>(cf: &F, center: f64, t_max: f64, n: usize, tail_tol: f64) -> RawGrid {
    let dt = 2.0 * t_max / n as f64;
    let dx = std::f64::consts::PI / t_max;
    let x0 = center - 0.5 * n as f64 * dx;
    let mut buf: Vec<Complex<f64>> = (0..n)
        .map(|j| {
            let t = -t_max + j as f64 * dt;
            cf(t) * Complex::from_polar(1.0, -(j as f64) * dt * x0)
        })
        .collect();
    plan(n).process(&mut buf);
    let phase = Complex::from_polar(dt / (2.0 * std::f64::consts::PI), t_max * x0);
    let values: Vec<f64> = buf
        .iter()
        .enumerate()
        .map(|(k, &b)| {
            let v = (phase * b).re;
            if k % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect();
    let edge = n / 16;
    let pos = |s: &[f64]| s.iter().map(|v| v.max(0.0)).sum::<f64>();
    let total = pos(&values);
    let covered = pos(&values[..edge]) < tail_tol * total && pos(&values[n - edge..]) < tail_tol * total;
    RawGrid { x0, dx, values, covered }
}

/// Inverts an arbitrary characteristic function `cf` onto a grid centred at `center`.
pub fn invert_cf<F: Fn(f64) -> Complex<f64>>(cf: F, center: f64, cfg: &FftConfig) -> Result<DensityGrid> {
    cfg.validate()?;
    let (t0, adaptive) = match cfg.t_max {
        Some(t) => {
            let m = cf(t).norm();
            if !(m < CF_DECAY) {
                return Err(DensityError::Config(format!(
                    "|phi(t_max)| = {m:.3e} at t_max = {t} is not below {CF_DECAY:e}; increase t_max"
                )));
            }
            (t, false)
        }
        None => (decay_point(&cf)?, true),
    };
    let mut n = cfg.n_points;
    let mut raw = raw_inversion(&cf, center, t0, n, cfg.tail_mass_tol);
    while !raw.covered {
        if n * 2 > cfg.max_points {
            return Err(DensityError::Config(format!(
                "grid of {n} points at t_max = {t0} does not cover the distribution (tail tolerance {:e})",
                cfg.tail_mass_tol
            )));
        }
        n *= 2;
        raw = raw_inversion(&cf, center, t0, n, cfg.tail_mass_tol);
    }
    if adaptive && cfg.max_oversample > 1 {
        // refine dx: shrink the window to the located mass and raise T accordingly
        let (lo, hi) = mass_window(&raw, 0.1 * cfg.tail_mass_tol);
        let half = 0.5 * (hi - lo) * 8.0 / 7.0;
        let t_fit = n as f64 * std::f64::consts::PI / (2.0 * half);
        let mut factor = 1.0;
        while factor * 2.0 * t0 <= t_fit && factor * 2.0 <= cfg.max_oversample as f64 {
            factor *= 2.0;
        }
        let mid = 0.5 * (lo + hi);
        while factor > 1.0 {
            let finer = raw_inversion(&cf, mid, factor * t0, n, cfg.tail_mass_tol);
            if finer.covered {
                raw = finer;
                break;
            }
            factor *= 0.5;
        }
    }
    Ok(DensityGrid::from_raw(raw.x0, raw.dx, &raw.values, cfg.clip_floor))
}

/// Density grid of any family by Fourier inversion of its characteristic function.
pub fn pdf_via_fft(theta: &Params, cfg: &FftConfig) -> Result<DensityGrid> {
    theta.validate()?;
    let center = mean_variance(theta).0;
    let th = *theta;
    invert_cf(move |t| th.cf(t), center, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempered_core::ParamVector;

    #[test]
    fn gaussian_inversion() {
        let grid = invert_cf(|t| Complex::new((-0.5 * t * t).exp(), 0.0), 0.0, &FftConfig::default()).unwrap();
        assert!((grid.total_mass - 1.0).abs() < 1e-10);
        for &x in &[-2.0f64, -0.3, 0.0, 1.1, 3.0] {
            let exact = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
            assert!((grid.interp(x) - exact).abs() < 1e-8, "x={x} {} {exact} dx={} x0={}", grid.interp(x), grid.dx, grid.x0);
        }
    }

    #[test]
    fn explicit_t_max_must_reach_decay() {
        let theta = ParamVector::cts(1.5, 1.0, 1.0, 1.0, 1.0, 0.0).unwrap();
        let cfg = FftConfig { t_max: Some(1.0), ..FftConfig::default() };
        assert!(matches!(pdf_via_fft(&theta, &cfg), Err(DensityError::Config(_))));
        let bad = FftConfig { n_points: 1000, ..FftConfig::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn interpolation_rules() {
        let vals: Vec<f64> = (0..10).map(|k| 0.1 + 0.05 * k as f64).collect();
        let g = DensityGrid::from_values(0.0, 0.5, vals.clone(), 1.0, 1e-15);
        for k in 0..10 {
            assert_eq!(g.interp(g.x(k)), vals[k]);
        }
        assert!((g.interp(0.25) - 0.5 * (vals[0] + vals[1])).abs() < 1e-15);
        assert!((g.interp(2.75) - 0.5 * (vals[5] + vals[6])).abs() < 1e-15);
        assert_eq!(g.interp(-0.1), 1e-15);
        assert_eq!(g.interp(100.0), 1e-15);
    }
}
