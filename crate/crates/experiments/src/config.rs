use serde::{Deserialize, Serialize};
use tempered_core::{Family, Params};
use tempered_estimate::Method;
use tempered_sim::Cutoff;

use crate::error::{ExperimentError, Result};

/// Parameter vector at which the Fisher information of the intervals is evaluated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InfoAt {
    /// Plug-in `I(θ̂)`.
    #[default]
    Estimate,
    /// `I(θ₀)`.
    Truth,
}

fn default_level() -> f64 {
    0.95
}

fn default_cutoff() -> Cutoff {
    Cutoff::Auto
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCConfig {
    /// True parameter `θ₀`; also fixes the family.
    pub theta0: Params,
    pub n_obs: usize,
    pub replications: usize,
    pub methods: Vec<Method>,
    /// Base seed; replication `r` draws from stream `r` of this seed.
    #[serde(default)]
    pub seed: u64,
    /// Worker threads; the global pool when `None`.
    #[serde(default)]
    pub parallelism: Option<usize>,
    /// TS' acceptance cut-off for CTS samples.
    #[serde(default = "default_cutoff")]
    pub cutoff: Cutoff,
    /// Nominal level of the MLE intervals (TSS only).
    #[serde(default = "default_level")]
    pub ci_level: f64,
    #[serde(default)]
    pub info_at: InfoAt,
}

impl MCConfig {
    pub fn new(theta0: Params, n_obs: usize, replications: usize, methods: Vec<Method>) -> Self {
        Self {
            theta0,
            n_obs,
            replications,
            methods,
            seed: 0,
            parallelism: None,
            cutoff: default_cutoff(),
            ci_level: default_level(),
            info_at: InfoAt::default(),
        }
    }

    pub fn family(&self) -> Family {
        self.theta0.family()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.theta0.validate()?;
        if self.replications == 0 {
            return Err(ExperimentError::Config("replications must be at least 1".into()));
        }
        if self.n_obs < self.theta0.dim() {
            return Err(ExperimentError::Config(format!("n_obs = {} is below the {} parameters", self.n_obs, self.theta0.dim())));
        }
        if self.methods.is_empty() {
            return Err(ExperimentError::Config("no estimation methods given".into()));
        }
        if self.parallelism == Some(0) {
            return Err(ExperimentError::Config("parallelism must be positive".into()));
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(ExperimentError::Config(format!("ci_level {} is not in (0, 1)", self.ci_level)));
        }
        Ok(())
    }
}
