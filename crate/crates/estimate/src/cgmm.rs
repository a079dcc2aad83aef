//! Continuum GMM: the moment function `ĥ(t; θ) = φ̂(t) − φ_θ(t)` is matched
//! over `t ∈ [0, 1]` in the metric of the regularised inverse of the
//! empirical covariance operator, discretised with Gauss–Legendre nodes.

use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex;
use tempered_core::{Family, ParamVector};
use tempered_density::quad::gauss_legendre;

use crate::error::{EstimateError, Result};
use crate::fitting::{best_of, values};
use crate::kernel::kernel_matrix;
use crate::likelihood::{bounds_for, starts_for};
use crate::moments::empirical_char_fn;
use crate::optim::{OptimOptions, OptimResult};
use crate::regularize::{regularized_inverse, RegularizationScheme};
use crate::result::{EstimationResult, FitOptions, Method};

pub const DEFAULT_NODES: usize = 64;

/// Data-dependent part of the CGMM criterion. The weight matrix acts on the
/// real embedding `[Re v; Im v]` of `v_i = √w_i ĥ(t_i)`.
#[derive(Debug, Clone)]
pub struct CgmmCriterion {
    pub nodes: Vec<f64>,
    sqrt_w: Vec<f64>,
    phi_hat: Vec<Complex<f64>>,
    weight: DMatrix<f64>,
}

impl CgmmCriterion {
    pub fn new(x: &[f64], reg: &RegularizationScheme, n_nodes: usize) -> Result<Self> {
        reg.validate()?;
        if n_nodes == 0 {
            return Err(EstimateError::InvalidArgument("CGMM needs at least one quadrature node".into()));
        }
        if x.len() < 2 {
            return Err(EstimateError::SampleTooSmall { n: x.len(), needed: 2 });
        }
        let (nodes, w) = gauss_legendre(n_nodes, 0.0, 1.0);
        let sqrt_w: Vec<f64> = w.iter().map(|v| v.sqrt()).collect();
        let phi_hat = nodes.iter().map(|&t| empirical_char_fn(x, t)).collect();
        let k = kernel_matrix(x, &nodes);
        let m = n_nodes;
        let mut emb = DMatrix::zeros(2 * m, 2 * m);
        for i in 0..m {
            for j in 0..m {
                let a = k[i * m + j] * (sqrt_w[i] * sqrt_w[j]);
                emb[(i, j)] = a.re;
                emb[(m + i, m + j)] = a.re;
                emb[(i, m + j)] = -a.im;
                emb[(m + i, j)] = a.im;
            }
        }
        let weight = regularized_inverse(&emb, reg)?;
        Ok(Self { nodes, sqrt_w, phi_hat, weight })
    }

    /// Criterion value for the model characteristic function `cf`.
    pub fn value(&self, mut cf: impl FnMut(f64) -> Complex<f64>) -> f64 {
        let m = self.nodes.len();
        let mut v = nalgebra::DVector::zeros(2 * m);
        for (i, &t) in self.nodes.iter().enumerate() {
            let h = (self.phi_hat[i] - cf(t)) * self.sqrt_w[i];
            v[i] = h.re;
            v[m + i] = h.im;
        }
        if v.iter().any(|x| !x.is_finite()) {
            return f64::INFINITY;
        }
        v.dot(&(&self.weight * &v))
    }

    /// Minimises the criterion over a model parametrised by a plain vector;
    /// `cf` returns `None` for inadmissible parameters.
    pub fn minimize<F>(&self, cf: F, starts: &[Vec<f64>], lower: &[f64], upper: &[f64], opts: &OptimOptions) -> Option<OptimResult>
    where
        F: Fn(&[f64], f64) -> Option<Complex<f64>>,
    {
        let objective = |v: &[f64]| {
            let mut ok = true;
            let q = self.value(|t| {
                cf(v, t).unwrap_or_else(|| {
                    ok = false;
                    Complex::new(f64::NAN, 0.0)
                })
            });
            if ok { q } else { f64::INFINITY }
        };
        best_of(objective, starts, lower, upper, opts)
    }
}

pub fn fit_cgmm(x: &[f64], family: Family, reg: &RegularizationScheme, n_nodes: usize, opts: &FitOptions) -> Result<EstimationResult> {
    crate::fitting::centred(x, family, opts, |x, opts| fit_cgmm_inner(x, family, reg, n_nodes, opts))
}

fn fit_cgmm_inner(x: &[f64], family: Family, reg: &RegularizationScheme, n_nodes: usize, opts: &FitOptions) -> Result<EstimationResult> {
    let clock = Instant::now();
    let bounds = bounds_for(family, opts)?;
    let starts = starts_for(x, family, &bounds, opts)?;
    let crit = CgmmCriterion::new(x, reg, n_nodes)?;
    let cf = |v: &[f64], t: f64| ParamVector::new(family, v).ok().map(|theta| theta.cf(t));
    let best = crit
        .minimize(cf, &values(&starts), &bounds.lower, &bounds.upper, &opts.optim)
        .ok_or_else(|| EstimateError::NoStart("CGMM objective is not finite at any start".into()))?;
    let theta = ParamVector::new(family, &best.x)?;
    let method = Method::Cgmm { gamma: Some(reg.gamma), nodes: Some(n_nodes) };
    Ok(EstimationResult::from_optim(method, &best, theta, best.f, &bounds, clock.elapsed().as_secs_f64()))
}
