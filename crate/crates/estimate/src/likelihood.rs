//! Log-likelihood and maximum likelihood estimation.

use std::cell::RefCell;
use std::sync::Arc;
use std::time::Instant;

use tempered_core::{Bounds, Family, ParamVector, Params};
use tempered_density::{FamilyDensity, FftConfig};

use crate::error::{EstimateError, Result};
use crate::result::{EstimationResult, FitOptions, Method};
use crate::start::starting_values;
use crate::optim::minimize;

/// Densities below this value count as this value in the log-likelihood.
pub const DENSITY_FLOOR: f64 = 1e-15;

const CACHE_SIZE: usize = 16;

/// `Σ_j ln max(f(X_j; θ), 1e-15)`.
pub fn log_likelihood(x: &[f64], theta: &Params) -> Result<f64> {
    log_likelihood_with(x, theta, &FftConfig::default())
}

pub fn log_likelihood_with(x: &[f64], theta: &Params, cfg: &FftConfig) -> Result<f64> {
    let d = FamilyDensity::new(theta, cfg)?;
    sum_log_density(&d, x)
}

fn sum_log_density(d: &FamilyDensity, x: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &v in x {
        s += d.ln_pdf_floored(v, DENSITY_FLOOR)?;
    }
    Ok(s)
}

/// Log-likelihood of a fixed sample with the density of recently visited
/// parameter vectors cached (one FFT grid per distinct `θ`).
pub struct Likelihood<'a> {
    x: &'a [f64],
    cfg: FftConfig,
    cache: RefCell<Vec<(Vec<u64>, Arc<FamilyDensity>)>>,
}

impl<'a> Likelihood<'a> {
    pub fn new(x: &'a [f64], cfg: FftConfig) -> Self {
        Self { x, cfg, cache: RefCell::new(Vec::with_capacity(CACHE_SIZE)) }
    }

    fn density(&self, theta: &Params) -> Result<Arc<FamilyDensity>> {
        let key: Vec<u64> = theta.values().iter().map(|v| v.to_bits()).collect();
        if let Some((_, d)) = self.cache.borrow().iter().find(|(k, _)| *k == key) {
            return Ok(Arc::clone(d));
        }
        let d = Arc::new(FamilyDensity::new(theta, &self.cfg)?);
        let mut cache = self.cache.borrow_mut();
        if cache.len() == CACHE_SIZE {
            cache.remove(0);
        }
        cache.push((key, Arc::clone(&d)));
        Ok(d)
    }

    pub fn eval(&self, theta: &Params) -> Result<f64> {
        let d = self.density(theta)?;
        sum_log_density(&d, self.x)
    }
}

pub(crate) fn bounds_for(family: Family, opts: &FitOptions) -> Result<Bounds> {
    let b = opts.bounds.clone().unwrap_or_else(|| Bounds::default_for(family));
    if b.family != family {
        return Err(EstimateError::InvalidArgument(format!("bounds are for {}, not {family}", b.family)));
    }
    b.validate()?;
    Ok(b)
}

pub(crate) fn starts_for(x: &[f64], family: Family, bounds: &Bounds, opts: &FitOptions) -> Result<Vec<Params>> {
    if x.len() < family.dim() {
        return Err(EstimateError::SampleTooSmall { n: x.len(), needed: family.dim() });
    }
    match &opts.start {
        Some(s) if s.family() == family => Ok(vec![*s]),
        Some(s) => Err(EstimateError::InvalidArgument(format!("start is {}, not {family}", s.family()))),
        None => starting_values(x, family, bounds),
    }
}

/// Box-constrained maximisation of the log-likelihood. The fallback start is
/// only used when the first fit fails to converge.
pub fn fit_mle(x: &[f64], family: Family, opts: &FitOptions) -> Result<EstimationResult> {
    crate::fitting::centred(x, family, opts, |x, opts| fit_mle_inner(x, family, opts))
}

fn fit_mle_inner(x: &[f64], family: Family, opts: &FitOptions) -> Result<EstimationResult> {
    let clock = Instant::now();
    let bounds = bounds_for(family, opts)?;
    let starts = starts_for(x, family, &bounds, opts)?;
    let lik = Likelihood::new(x, opts.fft.clone());
    let n = x.len() as f64;
    let objective = |v: &[f64]| -> f64 {
        match ParamVector::new(family, v) {
            Ok(theta) => lik.eval(&theta).map(|l| -l / n).unwrap_or(f64::INFINITY),
            Err(_) => f64::INFINITY,
        }
    };
    let mut best: Option<crate::optim::OptimResult> = None;
    let mut iterations = 0;
    for s in &starts {
        let r = minimize(objective, &s.values(), &bounds.lower, &bounds.upper, &opts.optim);
        iterations += r.iterations;
        let done = r.converged && r.f.is_finite();
        if r.f.is_finite() && best.as_ref().is_none_or(|b| r.f < b.f) {
            best = Some(r);
        }
        if done {
            break;
        }
    }
    let mut best = best.ok_or_else(|| EstimateError::NoStart("log-likelihood is not finite at any start".into()))?;
    best.iterations = iterations;
    let theta = ParamVector::new(family, &best.x)?;
    Ok(EstimationResult::from_optim(Method::Mle, &best, theta, -best.f * n, &bounds, clock.elapsed().as_secs_f64()))
}
