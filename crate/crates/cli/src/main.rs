use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use tempered_core::{Family, ParamVector, Params};
use tempered_density::{model_grid, FftConfig};
use tempered_estimate::{fit, FitOptions, Method};
use tempered_experiments::{report_to_table, run_mc, MCConfig, TableFormat};
use tempered_pipeline::{run_pipeline, synthetic_prices, write_qq_csv, Deseasonalize, ModelKind, PipelineOptions, PriceSeries};
use tempered_sim::{sample, Cutoff};

#[derive(Parser)]
#[command(name = "tstable", version, about = "Tempered stable distributions: densities, sampling, estimation and fit diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Density on an FFT grid, written as `x,f` rows.
    Density {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_name = "PATH")]
        grid_out: Option<PathBuf>,
    },
    /// Draw an i.i.d. sample, one observation per line.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        /// Cut-off of the approximate TS' rejection step, or `auto`.
        #[arg(long, default_value = "2")]
        cutoff: Cutoff,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Estimate parameters from a sample file.
    Fit {
        #[arg(long)]
        family: Family,
        #[arg(long, value_parser = ["mle", "gmm", "cgmm", "gmc"])]
        method: String,
        /// Number of cumulant conditions (GMC).
        #[arg(long)]
        p: Option<usize>,
        /// Number of grid points (GMM).
        #[arg(long = "R", value_name = "R")]
        r: Option<usize>,
        /// Regularisation parameter (CGMM, GMC).
        #[arg(long)]
        gamma: Option<f64>,
        /// Quadrature nodes (CGMM).
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Monte Carlo study from a JSON configuration.
    Mc {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        /// CSV table; a text table goes to stdout when omitted.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Full report with per-replication estimates.
        #[arg(long, value_name = "PATH")]
        json_out: Option<PathBuf>,
    },
    /// GARCH filtering of a price series and fit diagnostics of the residuals.
    Gof {
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
        #[arg(long, default_value = "none")]
        deseasonalize: Deseasonalize,
        #[arg(long, value_delimiter = ',', default_value = "stable,cts,nts")]
        models: Vec<ModelKind>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        qq_out: Option<PathBuf>,
    },
    /// Synthetic price series with GARCH volatility and CTS innovations.
    Synth {
        #[arg(long, default_value_t = 0)]
        world: u64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    family: Family,
    /// Comma-separated parameter values in the family's order.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    params: Vec<f64>,
}

impl ModelArgs {
    fn theta(&self) -> Result<Params> {
        Ok(ParamVector::new(self.family, &self.params)?)
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// One number per line; a non-numeric first line is taken as a header.
fn read_sample(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let field = line.split(',').next().unwrap_or("").trim();
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if i == 0 => {}
            Err(_) => bail!("{}:{}: '{field}' is not a number", path.display(), i + 1),
        }
    }
    Ok(values)
}

fn method(name: &str, p: Option<usize>, r: Option<usize>, gamma: Option<f64>, nodes: Option<usize>) -> Result<Method> {
    Ok(match name {
        "mle" => Method::Mle,
        "gmm" => Method::Gmm { r },
        "cgmm" => Method::Cgmm { gamma, nodes },
        "gmc" => Method::Gmc { p: p.context("GMC needs --p")?, gamma },
        other => bail!("unknown method '{other}'"),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Density { model, grid_out } => {
            let grid = model_grid(&model.theta()?, &FftConfig::default())?;
            let mut w = output(grid_out.as_deref())?;
            writeln!(w, "x,f")?;
            for (x, f) in grid.nodes() {
                writeln!(w, "{x},{f}")?;
            }
            w.flush()?;
        }
        Command::Simulate { model, n, seed, stream, cutoff, out } => {
            let s = sample(&model.theta()?, n, seed, stream, cutoff)?;
            let mut w = output(out.as_deref())?;
            for v in &s.values {
                writeln!(w, "{v}")?;
            }
            w.flush()?;
        }
        Command::Fit { family, method: name, p, r, gamma, nodes, input, out } => {
            let x = read_sample(&input)?;
            let res = fit(&x, family, method(&name, p, r, gamma, nodes)?, &FitOptions::default())?;
            let mut w = output(out.as_deref())?;
            serde_json::to_writer_pretty(&mut w, &res)?;
            writeln!(w)?;
            w.flush()?;
        }
        Command::Mc { config, out, json_out } => {
            let text = fs::read_to_string(&config).with_context(|| format!("cannot read {}", config.display()))?;
            let report = run_mc(&MCConfig::from_json(&text)?)?;
            match out {
                Some(p) => fs::write(&p, report_to_table(&report, TableFormat::Csv))?,
                None => print!("{}", report_to_table(&report, TableFormat::Text)),
            }
            if let Some(p) = json_out {
                serde_json::to_writer_pretty(BufWriter::new(File::create(p)?), &report)?;
            }
        }
        Command::Gof { input, deseasonalize, models, out, qq_out } => {
            let series = PriceSeries::from_path(&input)?;
            let res = run_pipeline(&series, &PipelineOptions { deseasonalize, models })?;
            let mut w = output(out.as_deref())?;
            serde_json::to_writer_pretty(&mut w, &res.report)?;
            writeln!(w)?;
            w.flush()?;
            if let Some(p) = qq_out {
                let qq: Vec<_> = res.fitted.iter().map(|m| (m.kind.to_string(), tempered_pipeline::qq_data(&res.residuals, m))).collect();
                write_qq_csv(BufWriter::new(File::create(p)?), &qq)?;
            }
        }
        Command::Synth { world, out } => {
            let s = synthetic_prices(world)?;
            s.to_csv(output(out.as_deref())?)?;
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        // library errors already embed their source in the message
        let mut msg = e.to_string();
        for cause in e.chain().skip(1) {
            let c = cause.to_string();
            if !msg.contains(&c) {
                msg = format!("{msg}: {c}");
            }
        }
        eprintln!("error: {msg}");
        std::process::exit(1);
    }
}
