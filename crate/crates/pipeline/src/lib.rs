//! Application pipeline for daily prices: optional weekly seasonal filter,
//! log-returns, GARCH(1,1) quasi-likelihood filtering, and stable, CTS and
//! NTS fits to the standardised residuals with KS/AD/AIC/BIC diagnostics.

pub mod error;
pub mod garch;
pub mod gof;
pub mod model;
pub mod run;
pub mod series;
pub mod stable;
pub mod synthetic;

pub use error::{PipelineError, Result};
pub use garch::{fit_garch11, garch_loglik, simulate_garch11, GarchFit};
pub use gof::{gof_report, qq_data, write_qq_csv, GofReport};
pub use model::{fit_model, FittedModel, ModelKind, ModelParams};
pub use run::{run_pipeline, Deseasonalize, PipelineOptions, PipelineOutput, PipelineReport};
pub use series::{deseasonalize_weekly, log_returns, PriceSeries};
pub use stable::{fit_stable, stable_cf, StableParams};
pub use synthetic::synthetic_prices;
