//! Fitted innovation models with grid-based density, CDF and quantiles.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use tempered_core::{Family, Params};
use tempered_density::{invert_cf, model_grid, DensityGrid, FftConfig, GridCdf};
use tempered_estimate::{fit_cgmm, FitOptions, OptimOptions, RegularizationScheme};

use crate::error::{PipelineError, Result};
use crate::stable::{fit_stable, StableParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Stable,
    Cts,
    Nts,
}

impl FromStr for ModelKind {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "stable" => Ok(ModelKind::Stable),
            "cts" => Ok(ModelKind::Cts),
            "nts" => Ok(ModelKind::Nts),
            other => Err(PipelineError::Invalid(format!("unknown model '{other}'"))),
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Stable => "stable",
            ModelKind::Cts => "cts",
            ModelKind::Nts => "nts",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelParams {
    Stable(StableParams),
    Tempered(Params),
}

impl ModelParams {
    pub fn kind(&self) -> Result<ModelKind> {
        match self {
            ModelParams::Stable(_) => Ok(ModelKind::Stable),
            ModelParams::Tempered(p) => match p.family() {
                Family::Cts => Ok(ModelKind::Cts),
                Family::Nts => Ok(ModelKind::Nts),
                f => Err(PipelineError::Invalid(format!("{f} is not an innovation model"))),
            },
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            ModelParams::Stable(p) => p.values().to_vec(),
            ModelParams::Tempered(p) => p.values(),
        }
    }

    /// Number of free parameters (4 stable, 6 CTS, 5 NTS).
    pub fn k_params(&self) -> usize {
        match self {
            ModelParams::Stable(_) => 4,
            ModelParams::Tempered(p) => p.dim(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FittedModel {
    pub kind: ModelKind,
    pub params: ModelParams,
    grid: DensityGrid,
    cdf: GridCdf,
}

/// Grid settings for the stable baseline: its power tails need a wide grid
/// before the outer strips fall below the mass tolerance.
fn stable_fft() -> FftConfig {
    FftConfig { tail_mass_tol: 1e-5, max_points: 1 << 22, ..FftConfig::default() }
}

impl FittedModel {
    pub fn from_params(params: ModelParams) -> Result<Self> {
        let kind = params.kind()?;
        let grid = match &params {
            ModelParams::Stable(p) => {
                p.validate()?;
                let p = *p;
                invert_cf(move |t| p.cf(t), p.mu, &stable_fft())?
            }
            ModelParams::Tempered(p) => model_grid(p, &FftConfig::default())?,
        };
        let cdf = GridCdf::from_grid(&grid);
        Ok(Self { kind, params, grid, cdf })
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.grid.interp(x).max(0.0)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.cdf.cdf(x)
    }

    pub fn quantile(&self, p: f64) -> f64 {
        self.cdf.quantile(p)
    }

    pub fn k_params(&self) -> usize {
        self.params.k_params()
    }
}

/// CGMM fit with the default Tikhonov `γ = 0.01` and 64 nodes.
pub fn fit_model(x: &[f64], kind: ModelKind) -> Result<FittedModel> {
    let reg = RegularizationScheme::tikhonov(RegularizationScheme::DEFAULT_GAMMA);
    let nodes = tempered_estimate::cgmm::DEFAULT_NODES;
    let params = match kind {
        ModelKind::Stable => ModelParams::Stable(fit_stable(x, &reg, nodes, &OptimOptions::default())?),
        ModelKind::Cts => ModelParams::Tempered(fit_cgmm(x, Family::Cts, &reg, nodes, &FitOptions::default())?.theta_hat),
        ModelKind::Nts => ModelParams::Tempered(fit_cgmm(x, Family::Nts, &reg, nodes, &FitOptions::default())?.theta_hat),
    };
    FittedModel::from_params(params)
}
