//! Shared multi-start driver for the quadratic-form estimators.

use tempered_core::{Bounds, Family, ParamVector, Params};

use crate::error::Result;
use crate::result::{EstimationResult, FitOptions};

use crate::optim::{minimize, OptimOptions, OptimResult};

/// Runs the optimiser from every start and keeps the smallest finite
/// objective; `iterations` accumulates over starts.
pub(crate) fn best_of<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    starts: &[Vec<f64>],
    lower: &[f64],
    upper: &[f64],
    opts: &OptimOptions,
) -> Option<OptimResult> {
    let mut best: Option<OptimResult> = None;
    let mut iterations = 0;
    for s in starts {
        let r = minimize(&mut f, s, lower, upper, opts);
        iterations += r.iterations;
        if r.f.is_finite() && best.as_ref().is_none_or(|b| r.f < b.f) {
            best = Some(r);
        }
    }
    best.map(|mut b| {
        b.iterations = iterations;
        b
    })
}

pub(crate) fn values(starts: &[Params]) -> Vec<Vec<f64>> {
    starts.iter().map(|p| p.values()).collect()
}

/// Runs `fit` on the sample centred at its mean when the family has a
/// location parameter, with start and bounds shifted alike, and moves the
/// location estimate back. This makes every estimator location-equivariant.
pub(crate) fn centred<F>(x: &[f64], family: Family, opts: &FitOptions, fit: F) -> Result<EstimationResult>
where
    F: FnOnce(&[f64], &FitOptions) -> Result<EstimationResult>,
{
    if !matches!(family, Family::Cts | Family::Nts) || x.is_empty() {
        return fit(x, opts);
    }
    let shift = x.iter().sum::<f64>() / x.len() as f64;
    if !shift.is_finite() {
        return fit(x, opts);
    }
    let xc: Vec<f64> = x.iter().map(|v| v - shift).collect();
    let mut inner = opts.clone();
    inner.bounds = Some(opts.bounds.clone().unwrap_or_else(|| Bounds::default_for(family)).shift_location(-shift));
    if let Some(s) = &opts.start {
        inner.start = Some(move_location(s, -shift)?);
    }
    let mut r = fit(&xc, &inner)?;
    r.theta_hat = move_location(&r.theta_hat, shift)?;
    Ok(r)
}

fn move_location(theta: &Params, by: f64) -> Result<Params> {
    let mut v = theta.values();
    if let Some(last) = v.last_mut() {
        *last += by;
    }
    Ok(ParamVector::new(theta.family(), &v)?)
}
