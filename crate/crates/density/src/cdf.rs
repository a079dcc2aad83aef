//! Distribution functions from density grids (cumulative trapezoid) and
//! quantiles by bisection.

use tempered_core::{mean_variance, ParamVector, Params};

use crate::error::Result;
use crate::fft::{pdf_via_fft, DensityGrid, FftConfig};
use crate::tss::TssDensity;

const TABULATION_POINTS: usize = 1 << 14;

#[derive(Debug, Clone)]
pub struct GridCdf {
    x0: f64,
    dx: f64,
    cum: Vec<f64>,
}

impl GridCdf {
    pub fn from_grid(grid: &DensityGrid) -> Self {
        let mut cum = Vec::with_capacity(grid.len());
        let mut acc = 0.0;
        cum.push(0.0);
        for w in grid.values.windows(2) {
            acc += 0.5 * grid.dx * (w[0] + w[1]);
            cum.push(acc);
        }
        let total = acc;
        for c in cum.iter_mut() {
            *c = (*c / total).clamp(0.0, 1.0);
        }
        Self { x0: grid.x0, dx: grid.dx, cum }
    }

    pub fn lower(&self) -> f64 {
        self.x0
    }

    pub fn upper(&self) -> f64 {
        self.x0 + (self.cum.len() - 1) as f64 * self.dx
    }

    /// Linear interpolation of the cumulative trapezoid; 0 and 1 outside.
    pub fn cdf(&self, x: f64) -> f64 {
        let s = (x - self.x0) / self.dx;
        if s.is_nan() {
            return f64::NAN;
        }
        if s <= 0.0 {
            return 0.0;
        }
        let last = self.cum.len() - 1;
        if s >= last as f64 {
            return 1.0;
        }
        let k = s.floor() as usize;
        let t = s - k as f64;
        (self.cum[k] + t * (self.cum[k + 1] - self.cum[k])).clamp(0.0, 1.0)
    }

    /// Smallest `x` with `cdf(x) ≥ p`, by bisection.
    pub fn quantile(&self, p: f64) -> f64 {
        let (mut lo, mut hi) = (self.lower(), self.upper());
        if p <= 0.0 {
            return lo;
        }
        if p >= 1.0 {
            return hi;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid) >= p {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-13 * (1.0 + hi.abs()) {
                break;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Density grid used for distribution functions: the exact TSS/TS' (`α<1`)
/// density tabulated on `[0, hi]`, the FFT grid otherwise.
pub fn model_grid(theta: &Params, cfg: &FftConfig) -> Result<DensityGrid> {
    theta.validate()?;
    let (tss, shift) = match *theta {
        ParamVector::Tss(p) => (Some(p), 0.0),
        ParamVector::TsPrime(p) if p.alpha < 1.0 => {
            let (m, _) = mean_variance(&ParamVector::Tss(p));
            (Some(p), m)
        }
        _ => (None, 0.0),
    };
    match tss {
        Some(p) => {
            let dens = TssDensity::from_params(p)?;
            let (m, v) = mean_variance(&ParamVector::Tss(p));
            let hi = m + 20.0 * v.sqrt() + 35.0 / p.lambda;
            let dx = hi / (TABULATION_POINTS - 1) as f64;
            let raw = (0..TABULATION_POINTS).map(|k| dens.pdf(k as f64 * dx)).collect::<Result<Vec<_>>>()?;
            Ok(DensityGrid::from_raw(-shift, dx, &raw, cfg.clip_floor))
        }
        None => pdf_via_fft(theta, cfg),
    }
}

/// Distribution function of `θ` at `x`.
pub fn cdf(theta: &Params, x: f64) -> Result<f64> {
    let grid = model_grid(theta, &FftConfig::default())?;
    Ok(GridCdf::from_grid(&grid).cdf(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits_and_monotone() {
        let theta = ParamVector::cts(1.5, 1.0, 1.0, 1.0, 1.0, 0.0).unwrap();
        let c = GridCdf::from_grid(&model_grid(&theta, &FftConfig::default()).unwrap());
        assert_eq!(c.cdf(-1e6), 0.0);
        assert_eq!(c.cdf(1e6), 1.0);
        assert!((c.cdf(0.0) - 0.5).abs() < 1e-4);
        let mut prev = 0.0;
        for i in 0..2000 {
            let v = c.cdf(-20.0 + 0.02 * i as f64);
            assert!(v >= prev);
            prev = v;
        }
        let q = c.quantile(0.9);
        assert!((c.cdf(q) - 0.9).abs() < 1e-9);
    }
}
