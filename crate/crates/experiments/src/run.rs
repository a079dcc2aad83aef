//! Replication loop and aggregation.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tempered_core::{Family, Params};
use tempered_estimate::{asymptotic_ci, coverage, fisher_information, fit, ConfidenceInterval, FisherInfo, FitOptions, Method};
use tempered_sim::sample;

use crate::config::{InfoAt, MCConfig};
use crate::error::Result;

/// One fit of one replication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fitted {
    pub theta_hat: Vec<f64>,
    pub converged: bool,
    pub boundary_hit: bool,
    pub runtime_seconds: f64,
    pub ci: Option<ConfidenceInterval>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Replication {
    pub index: u64,
    /// One entry per configured method; `Err` carries the failure message.
    pub fits: Vec<Result<Fitted, String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub successes: usize,
    pub failures: usize,
    pub bias: Vec<f64>,
    pub rmse: Vec<f64>,
    pub mad: Vec<f64>,
    /// Per-component interval coverage, over replications with an interval.
    pub coverage: Option<Vec<f64>>,
    pub intervals: usize,
    pub mean_runtime_seconds: f64,
    pub boundary_rate: f64,
    pub nonconverged: usize,
    /// Successful estimates in replication order.
    pub estimates: Vec<Vec<f64>>,
}

impl MethodSummary {
    /// Monte Carlo standard errors of the bias and RMSE (delta method).
    pub fn standard_errors(&self, theta0: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.estimates.len() as f64;
        let mut se_bias = Vec::with_capacity(theta0.len());
        let mut se_rmse = Vec::with_capacity(theta0.len());
        for (k, &t) in theta0.iter().enumerate() {
            let e: Vec<f64> = self.estimates.iter().map(|v| v[k] - t).collect();
            let mean = e.iter().sum::<f64>() / n;
            let var = e.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            se_bias.push((var / n).sqrt());
            let sq: Vec<f64> = e.iter().map(|x| x * x).collect();
            let msq = sq.iter().sum::<f64>() / n;
            let var_sq = sq.iter().map(|x| (x - msq).powi(2)).sum::<f64>() / (n - 1.0);
            se_rmse.push((var_sq / n).sqrt() / (2.0 * msq.sqrt()));
        }
        (se_bias, se_rmse)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCReport {
    pub family: Family,
    pub theta0: Params,
    pub n_obs: usize,
    pub replications: usize,
    /// Replications whose sample could not be drawn.
    pub sample_failures: usize,
    pub methods: Vec<MethodSummary>,
}

impl MCReport {
    pub fn summary(&self, method: &Method) -> Option<&MethodSummary> {
        self.methods.iter().find(|m| m.method == *method)
    }

    /// The report with timings zeroed, for comparing runs.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        for m in &mut r.methods {
            m.mean_runtime_seconds = 0.0;
        }
        r
    }
}

/// Sum that does not depend on the order of the inputs.
fn sorted_sum(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v.iter().sum()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Aggregates replications of one method; the result does not depend on the
/// order of `fits`.
pub fn summarize(method: Method, theta0: &[f64], fits: &[&Result<Fitted, String>]) -> MethodSummary {
    let ok: Vec<&Fitted> = fits.iter().filter_map(|f| f.as_ref().ok()).collect();
    let n = ok.len() as f64;
    let d = theta0.len();
    let mut bias = Vec::with_capacity(d);
    let mut rmse = Vec::with_capacity(d);
    let mut mad = Vec::with_capacity(d);
    for k in 0..d {
        let e: Vec<f64> = ok.iter().map(|f| f.theta_hat[k] - theta0[k]).collect();
        bias.push(sorted_sum(e.clone()) / n);
        rmse.push((sorted_sum(e.iter().map(|x| x * x).collect()) / n).sqrt());
        mad.push(median(e.iter().map(|x| x.abs()).collect()));
    }
    let cis: Vec<ConfidenceInterval> = ok.iter().filter_map(|f| f.ci.clone()).collect();
    MethodSummary {
        method,
        successes: ok.len(),
        failures: fits.len() - ok.len(),
        bias,
        rmse,
        mad,
        coverage: (!cis.is_empty()).then(|| coverage(&cis, theta0)),
        intervals: cis.len(),
        mean_runtime_seconds: sorted_sum(ok.iter().map(|f| f.runtime_seconds).collect()) / n,
        boundary_rate: ok.iter().filter(|f| f.boundary_hit).count() as f64 / n,
        nonconverged: ok.iter().filter(|f| !f.converged).count(),
        estimates: ok.iter().map(|f| f.theta_hat.clone()).collect(),
    }
}

fn interval(cfg: &MCConfig, fitted: &[f64], at_truth: Option<&FisherInfo>) -> Option<ConfidenceInterval> {
    let info = match at_truth {
        Some(i) => i.clone(),
        None => fisher_information(&Params::new(Family::Tss, fitted).ok()?).ok()?,
    };
    asymptotic_ci(fitted, &info, cfg.n_obs, cfg.ci_level).ok()
}

/// Draws replication `index` and fits every configured method.
pub fn run_replication(cfg: &MCConfig, index: u64, info0: Option<&FisherInfo>) -> Replication {
    let x = match sample(&cfg.theta0, cfg.n_obs, cfg.seed, index, cfg.cutoff) {
        Ok(s) => s.values,
        Err(e) => return Replication { index, fits: vec![Err(format!("sampling failed: {e}")); cfg.methods.len()] },
    };
    let opts = FitOptions::default();
    let fits = cfg
        .methods
        .iter()
        .map(|&method| {
            let clock = Instant::now();
            let r = fit(&x, cfg.family(), method, &opts).map_err(|e| e.to_string())?;
            let theta_hat = r.theta_hat.values();
            let ci = (cfg.family() == Family::Tss && method == Method::Mle).then(|| interval(cfg, &theta_hat, info0)).flatten();
            Ok(Fitted { theta_hat, converged: r.converged, boundary_hit: r.boundary_hit, runtime_seconds: clock.elapsed().as_secs_f64(), ci })
        })
        .collect();
    Replication { index, fits }
}

/// Runs all replications and returns the per-replication records in order.
pub fn run_replications(cfg: &MCConfig) -> Result<Vec<Replication>> {
    cfg.validate()?;
    let info0 = match (cfg.family(), cfg.info_at) {
        (Family::Tss, InfoAt::Truth) if cfg.methods.contains(&Method::Mle) => Some(fisher_information(&cfg.theta0)?),
        _ => None,
    };
    let work = || (0..cfg.replications as u64).into_par_iter().map(|i| run_replication(cfg, i, info0.as_ref())).collect();
    Ok(match cfg.parallelism {
        Some(k) => rayon::ThreadPoolBuilder::new().num_threads(k).build()?.install(work),
        None => work(),
    })
}

pub fn aggregate(cfg: &MCConfig, reps: &[Replication]) -> MCReport {
    let theta0 = cfg.theta0.values();
    let methods = cfg
        .methods
        .iter()
        .enumerate()
        .map(|(m, &method)| {
            let fits: Vec<&Result<Fitted, String>> = reps.iter().map(|r| &r.fits[m]).collect();
            summarize(method, &theta0, &fits)
        })
        .collect();
    let sample_failures = reps
        .iter()
        .filter(|r| r.fits.iter().all(|f| matches!(f, Err(e) if e.starts_with("sampling failed"))))
        .count();
    MCReport { family: cfg.family(), theta0: cfg.theta0, n_obs: cfg.n_obs, replications: reps.len(), sample_failures, methods }
}

/// Simulates, fits and aggregates; the report is a deterministic function
/// of the configuration apart from the recorded runtimes.
pub fn run_mc(cfg: &MCConfig) -> Result<MCReport> {
    let reps = run_replications(cfg)?;
    Ok(aggregate(cfg, &reps))
}
