//! Two-step generalised method of cumulants: raw moments of orders `1..=p`
//! are matched to their model values obtained from the cumulants.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use tempered_core::{Family, ParamVector};

use crate::bell::{check_order, model_raw_moments};
use crate::error::{EstimateError, Result};
use crate::fitting::{best_of, values};
use crate::likelihood::{bounds_for, starts_for};
use crate::moments::raw_moments;
use crate::regularize::{regularized_inverse, RegularizationScheme};
use crate::result::{EstimationResult, FitOptions, Method};

/// `n^{-1} Σ_j g(X_j; θ) g(X_j; θ)ᵀ` with `g_k(x; θ) = x^k − m_k(θ)`.
pub fn gmc_covariance(x: &[f64], model: &[f64]) -> DMatrix<f64> {
    let p = model.len();
    let mut out = DMatrix::zeros(p, p);
    let mut g = DVector::zeros(p);
    for &v in x {
        let mut pow = 1.0;
        for k in 0..p {
            pow *= v;
            g[k] = pow - model[k];
        }
        out.syger(1.0, &g, &g, 1.0);
    }
    out /= x.len() as f64;
    out.fill_upper_triangle_with_lower_triangle();
    out
}

pub fn fit_gmc(x: &[f64], family: Family, p: usize, reg: &RegularizationScheme, opts: &FitOptions) -> Result<EstimationResult> {
    crate::fitting::centred(x, family, opts, |x, opts| fit_gmc_inner(x, family, p, reg, opts))
}

fn fit_gmc_inner(x: &[f64], family: Family, p: usize, reg: &RegularizationScheme, opts: &FitOptions) -> Result<EstimationResult> {
    let clock = Instant::now();
    reg.validate()?;
    let bounds = bounds_for(family, opts)?;
    let starts = starts_for(x, family, &bounds, opts)?;
    check_order(&starts[0], p)?;
    let sample = DVector::from_vec(raw_moments(x, p));
    let conditions = |v: &[f64]| -> Option<DVector<f64>> {
        let theta = ParamVector::new(family, v).ok()?;
        let m = model_raw_moments(&theta, p).ok()?;
        let g = &sample - DVector::from_vec(m);
        g.iter().all(|v| v.is_finite()).then_some(g)
    };
    let step1 = |v: &[f64]| conditions(v).map_or(f64::INFINITY, |g| g.norm_squared());
    let first = best_of(step1, &values(&starts), &bounds.lower, &bounds.upper, &opts.optim)
        .ok_or_else(|| EstimateError::NoStart("GMC objective is not finite at any start".into()))?;
    let theta1 = ParamVector::new(family, &first.x)?;
    let w = regularized_inverse(&gmc_covariance(x, &model_raw_moments(&theta1, p)?), reg)?;
    let step2 = |v: &[f64]| conditions(v).map_or(f64::INFINITY, |g| g.dot(&(&w * &g)));
    let mut second = best_of(step2, std::slice::from_ref(&first.x), &bounds.lower, &bounds.upper, &opts.optim)
        .ok_or_else(|| EstimateError::NoStart("second-step GMC objective is not finite".into()))?;
    second.iterations += first.iterations;
    let theta = ParamVector::new(family, &second.x)?;
    let method = Method::Gmc { p, gamma: Some(reg.gamma) };
    Ok(EstimationResult::from_optim(method, &second, theta, second.f, &bounds, clock.elapsed().as_secs_f64()))
}
