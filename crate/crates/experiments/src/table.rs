//! Rendering of Monte Carlo reports as bias (RMSE) [MAD] tables.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use tempered_core::Family;

use crate::error::{ExperimentError, Result};
use crate::run::{MCReport, MethodSummary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    Csv,
    Text,
}

impl FromStr for TableFormat {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(TableFormat::Csv),
            "text" | "txt" => Ok(TableFormat::Text),
            _ => Err(ExperimentError::Config(format!("unknown table format '{s}'"))),
        }
    }
}

fn num(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-3) {
        format!("{v:.2E}")
    } else {
        format!("{v:.3}")
    }
}

/// `bias (RMSE) [MAD]`.
pub fn format_cell(bias: f64, rmse: f64, mad: f64) -> String {
    format!("{} ({}) [{}]", num(bias), num(rmse), num(mad))
}

/// Inverse of [`format_cell`].
pub fn parse_cell(cell: &str) -> Option<(f64, f64, f64)> {
    let (bias, rest) = cell.split_once(" (")?;
    let (rmse, rest) = rest.split_once(") [")?;
    let mad = rest.strip_suffix(']')?;
    Some((bias.parse().ok()?, rmse.parse().ok()?, mad.parse().ok()?))
}

fn header(family: Family, with_coverage: bool) -> Vec<String> {
    let mut h = vec!["method".to_string(), "n".to_string()];
    h.extend(family.param_symbols().iter().map(|s| s.to_string()));
    h.push("time".into());
    h.push("boundary".into());
    h.push("failures".into());
    if with_coverage {
        h.extend(family.param_symbols().iter().map(|s| format!("cov {s}")));
    }
    h
}

fn row(n: usize, m: &MethodSummary, with_coverage: bool) -> Vec<String> {
    let mut r = vec![m.method.to_string(), n.to_string()];
    r.extend((0..m.bias.len()).map(|k| format_cell(m.bias[k], m.rmse[k], m.mad[k])));
    r.push(format!("{:.3}", m.mean_runtime_seconds));
    r.push(format!("{:.3}", m.boundary_rate));
    r.push(m.failures.to_string());
    if with_coverage {
        match &m.coverage {
            Some(c) => r.extend(c.iter().map(|v| format!("{:.1}", 100.0 * v))),
            None => r.extend(std::iter::repeat_n(String::new(), m.bias.len())),
        }
    }
    r
}

/// Renders one report; see [`reports_to_table`].
pub fn report_to_table(report: &MCReport, format: TableFormat) -> String {
    reports_to_table(std::slice::from_ref(report), format)
}

/// One row per method and sample size, one column per parameter. Reports are
/// expected to share a family; the header follows the first one.
pub fn reports_to_table(reports: &[MCReport], format: TableFormat) -> String {
    let Some(first) = reports.first() else {
        return String::new();
    };
    let with_coverage = reports.iter().flat_map(|r| &r.methods).any(|m| m.coverage.is_some());
    let mut rows = vec![header(first.family, with_coverage)];
    for r in reports {
        rows.extend(r.methods.iter().map(|m| row(r.n_obs, m, with_coverage)));
    }
    match format {
        TableFormat::Csv => {
            let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
            for r in &rows {
                w.write_record(r).expect("writing to memory");
            }
            String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is UTF-8")
        }
        TableFormat::Text => {
            let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
            let widths: Vec<usize> =
                (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
            let mut out = String::new();
            for r in &rows {
                let line: Vec<String> = r.iter().zip(&widths).map(|(s, &w)| format!("{s:<w$}")).collect();
                out.push_str(line.join("  ").trim_end());
                out.push('\n');
            }
            out
        }
    }
}
