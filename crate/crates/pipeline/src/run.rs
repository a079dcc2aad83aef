//! End-to-end run: prices → returns → GARCH residuals → fitted models.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{PipelineError, Result};
use crate::garch::fit_garch11;
use crate::gof::{gof_report, GofReport};
use crate::model::{fit_model, FittedModel, ModelKind, ModelParams};
use crate::series::{deseasonalize_weekly, log_returns, PriceSeries};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Deseasonalize {
    #[default]
    None,
    Weekly,
}

impl FromStr for Deseasonalize {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Deseasonalize::None),
            "weekly" => Ok(Deseasonalize::Weekly),
            other => Err(PipelineError::Invalid(format!("unknown deseasonalisation '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub deseasonalize: Deseasonalize,
    pub models: Vec<ModelKind>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self { deseasonalize: Deseasonalize::None, models: vec![ModelKind::Stable, ModelKind::Cts, ModelKind::Nts] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GarchSummary {
    pub omega: f64,
    pub a: f64,
    pub b: f64,
    pub loglik: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub model: ModelKind,
    pub params: ModelParams,
    pub gof: GofReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub n_prices: usize,
    pub removed_prices: usize,
    pub n_returns: usize,
    pub garch: GarchSummary,
    pub models: Vec<ModelReport>,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub report: PipelineReport,
    pub residuals: Vec<f64>,
    pub fitted: Vec<FittedModel>,
}

pub fn run_pipeline(series: &PriceSeries, opts: &PipelineOptions) -> Result<PipelineOutput> {
    let cleaned = match opts.deseasonalize {
        Deseasonalize::None => series.drop_nonpositive(),
        Deseasonalize::Weekly => deseasonalize_weekly(series)?,
    };
    let returns = log_returns(&cleaned)?;
    let garch = fit_garch11(&returns.values)?;
    let mut fitted = Vec::with_capacity(opts.models.len());
    let mut models = Vec::with_capacity(opts.models.len());
    for &kind in &opts.models {
        let m = fit_model(&garch.residuals, kind)?;
        models.push(ModelReport { model: kind, params: m.params, gof: gof_report(&garch.residuals, &m) });
        fitted.push(m);
    }
    let report = PipelineReport {
        n_prices: series.len(),
        removed_prices: series.nonpositive(),
        n_returns: returns.len(),
        garch: GarchSummary { omega: garch.omega, a: garch.a, b: garch.b, loglik: garch.loglik },
        models,
    };
    Ok(PipelineOutput { report, residuals: garch.residuals, fitted })
}
