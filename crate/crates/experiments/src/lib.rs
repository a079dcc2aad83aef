//! Monte Carlo study of the estimators: simulate from `θ₀`, fit every
//! method, and summarise bias, RMSE, MAD, interval coverage, runtime and
//! boundary solutions.

pub mod config;
pub mod error;
pub mod run;
pub mod table;

pub use config::{InfoAt, MCConfig};
pub use error::{ExperimentError, Result};
pub use run::{aggregate, run_mc, run_replication, run_replications, summarize, Fitted, MCReport, MethodSummary, Replication};
pub use table::{format_cell, parse_cell, report_to_table, reports_to_table, TableFormat};
