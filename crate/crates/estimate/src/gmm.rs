//! Two-step GMM on the characteristic function over a finite frequency grid.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use tempered_core::{Family, ParamVector};

use crate::error::{EstimateError, Result};
use crate::fitting::{best_of, values};
use crate::grid::build_moment_grid;
use crate::likelihood::{bounds_for, starts_for};
use crate::moments::empirical_char_fn;
use crate::regularize::{regularized_inverse, RegularizationScheme};
use crate::result::{EstimationResult, FitOptions, Method};

/// Default number of grid points: 20 for CTS, 10 otherwise.
pub fn default_grid_size(family: Family) -> usize {
    match family {
        Family::Cts => 20,
        _ => 10,
    }
}

/// Stacked `[Re ĥ(t_r; θ); Im ĥ(t_r; θ)]` with `ĥ = φ̂ − φ_θ`.
pub fn gmm_conditions(phi_hat: &[Complex<f64>], ts: &[f64], theta: &ParamVector<f64>) -> Vec<f64> {
    let r = ts.len();
    let mut g = vec![0.0; 2 * r];
    for (i, (&t, ph)) in ts.iter().zip(phi_hat).enumerate() {
        let h = ph - theta.cf(t);
        g[i] = h.re;
        g[r + i] = h.im;
    }
    g
}

/// Sample covariance of the stacked `(cos tX, sin tX)` moment functions.
pub fn gmm_covariance(x: &[f64], ts: &[f64]) -> DMatrix<f64> {
    let r = ts.len();
    let n = x.len() as f64;
    let mut mean = DVector::zeros(2 * r);
    let mut second = DMatrix::zeros(2 * r, 2 * r);
    let mut g = DVector::zeros(2 * r);
    for &v in x {
        for (i, &t) in ts.iter().enumerate() {
            let (s, c) = (t * v).sin_cos();
            g[i] = c;
            g[r + i] = s;
        }
        mean += &g;
        second.syger(1.0, &g, &g, 1.0);
    }
    mean /= n;
    second /= n;
    let mut cov = second - &mean * mean.transpose();
    cov.fill_upper_triangle_with_lower_triangle();
    cov
}

pub fn fit_gmm(x: &[f64], family: Family, r: usize, reg: &RegularizationScheme, opts: &FitOptions) -> Result<EstimationResult> {
    crate::fitting::centred(x, family, opts, |x, opts| fit_gmm_inner(x, family, r, reg, opts))
}

fn fit_gmm_inner(x: &[f64], family: Family, r: usize, reg: &RegularizationScheme, opts: &FitOptions) -> Result<EstimationResult> {
    let clock = Instant::now();
    reg.validate()?;
    if r > x.len() {
        return Err(EstimateError::InvalidArgument(format!("grid size R = {r} exceeds the sample size {}", x.len())));
    }
    let bounds = bounds_for(family, opts)?;
    let starts = starts_for(x, family, &bounds, opts)?;
    let grid = build_moment_grid(x, r)?;
    let ts = &grid.t_values;
    let phi_hat: Vec<Complex<f64>> = ts.iter().map(|&t| empirical_char_fn(x, t)).collect();
    let conditions = |v: &[f64]| -> Option<DVector<f64>> {
        let theta = ParamVector::new(family, v).ok()?;
        let g = gmm_conditions(&phi_hat, ts, &theta);
        g.iter().all(|v| v.is_finite()).then(|| DVector::from_vec(g))
    };
    let step1 = |v: &[f64]| conditions(v).map_or(f64::INFINITY, |g| g.norm_squared());
    let first = best_of(step1, &values(&starts), &bounds.lower, &bounds.upper, &opts.optim)
        .ok_or_else(|| EstimateError::NoStart("GMM objective is not finite at any start".into()))?;
    let w = regularized_inverse(&gmm_covariance(x, ts), reg)?;
    let step2 = |v: &[f64]| conditions(v).map_or(f64::INFINITY, |g| g.dot(&(&w * &g)));
    let mut second = best_of(step2, std::slice::from_ref(&first.x), &bounds.lower, &bounds.upper, &opts.optim)
        .ok_or_else(|| EstimateError::NoStart("second-step GMM objective is not finite".into()))?;
    second.iterations += first.iterations;
    let theta = ParamVector::new(family, &second.x)?;
    Ok(EstimationResult::from_optim(Method::Gmm { r: Some(r) }, &second, theta, second.f, &bounds, clock.elapsed().as_secs_f64()))
}
