//! Frequency grid for the finite-dimensional characteristic-function GMM.

use serde::{Deserialize, Serialize};

use crate::error::{EstimateError, Result};
use crate::moments::empirical_char_fn;

/// Smallest grid point.
pub const GRID_EPS: f64 = 1e-6;
/// Upper end of the root scan.
pub const ROOT_SCAN_MAX: f64 = 100.0;
/// Grid end when no root is found.
pub const FALLBACK_T_MAX: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentGrid {
    pub t_values: Vec<f64>,
    /// Set when no root of `Re φ̂` was found and the grid ends at 1.
    pub fallback: bool,
}

/// First positive root of `t ↦ Re φ̂(t)` on `(0, upper]`, scanned on a step
/// tied to the sample scale and refined by bisection.
pub fn first_real_root(x: &[f64], upper: f64) -> Option<f64> {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let sd = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    let scale = sd.max(mean.abs());
    if !(scale > 0.0) {
        return None;
    }
    let h = (0.01 / scale).max(upper / 50_000.0);
    let re = |t: f64| empirical_char_fn(x, t).re;
    let mut a = 0.0;
    while a < upper {
        let b = (a + h).min(upper);
        let fb = re(b);
        if fb <= 0.0 {
            let (mut lo, mut hi) = (a, b);
            if fb == 0.0 {
                return Some(b);
            }
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if re(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        a = b;
    }
    None
}

/// `R` equally spaced points from `1e-6` to the first root of `Re φ̂`.
pub fn build_moment_grid(x: &[f64], r: usize) -> Result<MomentGrid> {
    if r < 2 {
        return Err(EstimateError::InvalidArgument(format!("moment grid needs at least 2 points, got {r}")));
    }
    let (end, fallback) = match first_real_root(x, ROOT_SCAN_MAX) {
        Some(root) if root > GRID_EPS => (root, false),
        _ => (FALLBACK_T_MAX, true),
    };
    let step = (end - GRID_EPS) / (r - 1) as f64;
    let mut t_values: Vec<f64> = (0..r).map(|i| GRID_EPS + step * i as f64).collect();
    t_values[r - 1] = end;
    Ok(MomentGrid { t_values, fallback })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_sample_root() {
        // Re φ̂ = cos(t) for the sample {−1, 1}
        let g = build_moment_grid(&[-1.0, 1.0], 10).unwrap();
        assert_eq!(g.t_values.len(), 10);
        assert_eq!(g.t_values[0], GRID_EPS);
        assert!((g.t_values[9] - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
        assert!(!g.fallback);
    }

    #[test]
    fn degenerate_sample_falls_back() {
        let g = build_moment_grid(&[0.0; 5], 4).unwrap();
        assert!(g.fallback);
        assert_eq!(*g.t_values.last().unwrap(), FALLBACK_T_MAX);
    }
}
