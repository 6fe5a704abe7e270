//! Command-line front end: argument and config-file parsing, sweeps, CSV export.
//!
//! Flags override values from `--config <file.json>`, whose keys are the long
//! flag names with `-` replaced by `_`. Rates are literals such as `1.5bits`
//! or `0.7nats`; bare numbers need `--units`.

mod commands;
mod literal;
mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::data::DataSource;
use crate::error::{Error, Result};

pub use literal::{parse_numbers, parse_rate, parse_rate_grid, Units};
pub use output::{fmt_g, render_csv, sidecar_path, Row, CSV_HEADER};

/// Environment variable read when `--workers` is absent.
pub const WORKERS_ENV: &str = "GMIB_WORKERS";

#[derive(Debug, Parser)]
#[command(
    name = "gmib",
    version,
    about = "Information Bottleneck tradeoffs for a binary Gaussian mixture"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandName,
    #[command(flatten)]
    pub knobs: Knobs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Subcommand)]
#[serde(rename_all = "lowercase")]
pub enum CommandName {
    /// Relevance I(Y;T) of each analytic scheme over a rate grid.
    Curve,
    /// Sign-estimator error of each scheme, optionally with Monte-Carlo checks.
    Classify,
    /// Per-coordinate unified scheme on a vector mixture.
    Vector,
    /// Leakage versus error on a projected, whitened digit pair.
    Mnist,
    /// Blahut–Arimoto and clustering/dropout baselines.
    Baselines,
}

/// Every tunable, as raw strings so that the file and flags share one parser.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Knobs {
    /// JSON file with defaults for any of the options below.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Units of bare rate values and of the rate column [bits|nats].
    #[arg(long, global = true)]
    pub units: Option<String>,
    /// Seed for every stochastic step [default: 0].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// CSV destination; a `.json` sidecar is written next to it. Stdout when absent.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads [default: $GMIB_WORKERS, else available parallelism].
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Mixture separations, `a,b,…` or `lo:hi:step` [default: 0.6,1,1.4142135623730951].
    #[arg(long, global = true)]
    pub beta: Option<String>,
    /// Coordinate separations of the vector model [default: 0.9,1,1.1].
    #[arg(long, global = true)]
    pub betas: Option<String>,
    /// Rate grid, `lo:hi:step` or a list of rate literals [default: 0:3:0.1nats].
    #[arg(long, global = true)]
    pub r_grid: Option<String>,
    /// A single rate; shorthand for a one-point grid.
    #[arg(long, global = true)]
    pub r: Option<String>,
    /// Total budget of the vector command (alias of --r).
    #[arg(long, global = true)]
    pub total_rate: Option<String>,
    /// Per-coordinate budgets, a list of rate literals summing to the total.
    #[arg(long, global = true)]
    pub allocation: Option<String>,
    /// Schemes or methods to emit, comma separated, or `all` [default: all].
    #[arg(long, global = true)]
    pub schemes: Option<String>,
    /// Monte-Carlo samples for classify rows and vector relevance [default: 20000].
    #[arg(long, global = true)]
    pub mc: Option<usize>,
    /// Jackknife chain-rule check with this many samples (vector).
    #[arg(long, global = true)]
    pub chain_rule: Option<usize>,
    /// Points of the discretized observation grid [default: 200].
    #[arg(long, global = true)]
    pub grid_points: Option<usize>,
    /// Grid reach beyond ±β in standard deviations [default: 5].
    #[arg(long, global = true)]
    pub span: Option<f64>,
    /// Blahut–Arimoto output alphabet [default: 32].
    #[arg(long, global = true)]
    pub t_size: Option<usize>,
    /// Random restarts per λ or per cluster count [default: 4].
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    /// λ values, `a,b,…` or `lo:hi:step` [default: 1..100 built-in sweep].
    #[arg(long, global = true)]
    pub lambdas: Option<String>,
    /// Cluster counts of the hard-partition baselines [default: 2].
    #[arg(long, global = true)]
    pub m: Option<String>,
    /// Iteration cap of the iterative solvers [default: 5000].
    #[arg(long, global = true)]
    pub max_iter: Option<usize>,
    /// Dropout weight-grid step on [-10, 10] [default: 0.5].
    #[arg(long, global = true)]
    pub dropout_step: Option<f64>,
    /// λ whose Lagrangian minimizer is flagged on the dropout frontier [default: 10].
    #[arg(long, global = true)]
    pub dropout_lambda: Option<f64>,
    /// IDX image file (mnist).
    #[arg(long, global = true)]
    pub images: Option<PathBuf>,
    /// IDX label file (mnist).
    #[arg(long, global = true)]
    pub labels: Option<PathBuf>,
    /// CSV dataset `label,v1,…` (mnist), instead of IDX.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Class pair mapped to -1,+1 [default: 7,9].
    #[arg(long, global = true)]
    pub classes: Option<String>,
    /// Projected dimension [default: 3].
    #[arg(long, global = true)]
    pub d0: Option<usize>,
    /// Samples kept per class [default: 2000].
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Channel draws per sample in the digit experiment [default: 10].
    #[arg(long, global = true)]
    pub replicates: Option<usize>,
    /// Jackknife bins per dimension in the digit experiment [default: 3].
    #[arg(long, global = true)]
    pub bins: Option<usize>,
}

macro_rules! merge_fields {
    ($cli:expr, $file:expr, $($f:ident),*) => {
        Knobs { config: $cli.config.clone(), $($f: $cli.$f.clone().or($file.$f.clone()),)* }
    };
}

impl Knobs {
    /// Flag values where given, file values otherwise.
    pub fn over(&self, file: &Knobs) -> Knobs {
        merge_fields!(
            self,
            file,
            units,
            seed,
            out,
            workers,
            beta,
            betas,
            r_grid,
            r,
            total_rate,
            allocation,
            schemes,
            mc,
            chain_rule,
            grid_points,
            span,
            t_size,
            restarts,
            lambdas,
            m,
            max_iter,
            dropout_step,
            dropout_lambda,
            images,
            labels,
            csv,
            classes,
            d0,
            cap,
            replicates,
            bins
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverKnobs {
    pub grid_points: usize,
    pub span: f64,
    pub t_size: usize,
    pub restarts: usize,
    /// `None` selects the built-in sweep.
    pub lambdas: Option<Vec<f64>>,
    pub m: Vec<usize>,
    pub max_iter: usize,
    pub dropout_step: f64,
    pub dropout_lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MnistKnobs {
    pub source: Option<DataSource>,
    pub classes: (i64, i64),
    pub d0: usize,
    pub cap: usize,
    pub replicates: usize,
    pub bins: usize,
}

/// A fully resolved invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandName,
    pub units: Units,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub workers: usize,
    pub betas: Vec<f64>,
    pub vector_betas: Vec<f64>,
    /// Nats.
    pub r_grid: Vec<f64>,
    /// Nats; one entry per vector coordinate.
    pub allocation: Option<Vec<f64>>,
    pub schemes: Vec<String>,
    pub mc: Option<usize>,
    pub mc_samples: usize,
    pub chain_rule: Option<usize>,
    pub solver: SolverKnobs,
    pub mnist: MnistKnobs,
    /// Warnings raised while resolving, echoed to stderr and the sidecar.
    pub warnings: Vec<String>,
}

fn read_config_file(path: &Path) -> Result<Knobs> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Config(vec![format!("{}: {e}", path.display())]))
}

fn default_workers() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| Error::Config(vec![format!("{WORKERS_ENV}=`{v}` is not a positive integer")])),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Collects every problem instead of stopping at the first.
struct Problems(Vec<String>);

impl Problems {
    fn take<T>(&mut self, field: &str, r: std::result::Result<T, String>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.0.push(format!("--{field}: {e}"));
                None
            }
        }
    }
}

fn positive(v: usize, field: &str, problems: &mut Problems) -> usize {
    if v == 0 {
        problems.0.push(format!("--{field}: must be positive"));
    }
    v
}

/// Resolves flags over the optional config file.
pub fn resolve(command: CommandName, flags: &Knobs) -> Result<RunConfig> {
    let file = match &flags.config {
        Some(p) => read_config_file(p)?,
        None => Knobs::default(),
    };
    let k = flags.over(&file);
    let mut p = Problems(Vec::new());
    let mut warnings = Vec::new();

    let units = match &k.units {
        Some(u) => p.take("units", u.parse::<Units>()),
        None => None,
    };
    let betas = p
        .take(
            "beta",
            parse_numbers(k.beta.as_deref().unwrap_or("0.6,1,1.4142135623730951")),
        )
        .unwrap_or_default();
    if betas.iter().any(|b| !(*b >= 0.0 && b.is_finite())) {
        p.0.push("--beta: separations must be finite and nonnegative".into());
    }
    let vector_betas = p
        .take("betas", parse_numbers(k.betas.as_deref().unwrap_or("0.9,1,1.1")))
        .unwrap_or_default();
    if vector_betas.iter().any(|b| !(*b >= 0.0 && b.is_finite())) {
        p.0.push("--betas: separations must be finite and nonnegative".into());
    }
    let single = k.r.as_ref().or(k.total_rate.as_ref());
    let r_grid = match (single, &k.r_grid) {
        (Some(_), Some(_)) => {
            p.0.push("--r/--total-rate and --r-grid are mutually exclusive".into());
            Vec::new()
        }
        (Some(s), None) => p
            .take("r", parse_rate(s, units, &mut warnings).map(|v| vec![v]))
            .unwrap_or_default(),
        (None, Some(g)) => p
            .take("r-grid", parse_rate_grid(g, units, &mut warnings))
            .unwrap_or_default(),
        (None, None) => match command {
            CommandName::Mnist => (1..=24).map(|i| Units::Bits.to_nats(0.25 * i as f64)).collect(),
            _ => (0..=30).map(|i| 0.1 * i as f64).collect(),
        },
    };
    let allocation = match &k.allocation {
        Some(a) => p.take(
            "allocation",
            a.split(',').map(|v| parse_rate(v, units, &mut warnings)).collect(),
        ),
        None => None,
    };
    let schemes: Vec<String> = k
        .schemes
        .as_deref()
        .unwrap_or("all")
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    let lambdas = match &k.lambdas {
        Some(l) => p.take("lambdas", parse_numbers(l)),
        None => None,
    };
    if lambdas.as_ref().is_some_and(|l| l.iter().any(|v| !(*v > 0.0))) {
        p.0.push("--lambdas: values must be positive".into());
    }
    let m: Vec<usize> = p
        .take(
            "m",
            k.m.as_deref()
                .unwrap_or("2")
                .split(',')
                .map(|v| v.trim().parse::<usize>().map_err(|_| format!("`{v}` is not a count")))
                .collect(),
        )
        .unwrap_or_default();
    let classes = p
        .take("classes", {
            let c: Vec<&str> = k.classes.as_deref().unwrap_or("7,9").split(',').collect();
            match c.as_slice() {
                [a, b] => a
                    .trim()
                    .parse::<i64>()
                    .and_then(|a| b.trim().parse::<i64>().map(|b| (a, b)))
                    .map_err(|_| "expected two integer class labels".to_string()),
                _ => Err("expected two integer class labels `a,b`".to_string()),
            }
        })
        .unwrap_or((7, 9));
    let source = match (&k.images, &k.labels, &k.csv) {
        (Some(images), Some(labels), None) => Some(DataSource::Idx {
            images: images.clone(),
            labels: labels.clone(),
        }),
        (None, None, Some(csv)) => Some(DataSource::Csv(csv.clone())),
        (None, None, None) => None,
        _ => {
            p.0.push("--images/--labels (together) and --csv are alternatives".into());
            None
        }
    };
    if command == CommandName::Mnist && source.is_none() && p.0.is_empty() {
        p.0.push("mnist needs --images and --labels, or --csv".into());
    }
    let span = k.span.unwrap_or(5.0);
    if !(span > 0.0 && span.is_finite()) {
        p.0.push("--span: must be positive".into());
    }
    let dropout_step = k.dropout_step.unwrap_or(0.5);
    if !(dropout_step > 0.0 && dropout_step <= 20.0) {
        p.0.push("--dropout-step: must lie in (0, 20]".into());
    }
    let dropout_lambda = k.dropout_lambda.unwrap_or(10.0);
    if !(dropout_lambda > 0.0 && dropout_lambda.is_finite()) {
        p.0.push("--dropout-lambda: must be positive".into());
    }
    let solver = SolverKnobs {
        grid_points: positive(k.grid_points.unwrap_or(200), "grid-points", &mut p),
        span,
        t_size: positive(k.t_size.unwrap_or(32), "t-size", &mut p),
        restarts: positive(k.restarts.unwrap_or(4), "restarts", &mut p),
        lambdas,
        m,
        max_iter: positive(k.max_iter.unwrap_or(5000), "max-iter", &mut p),
        dropout_step,
        dropout_lambda,
    };
    let mnist = MnistKnobs {
        source,
        classes,
        d0: positive(k.d0.unwrap_or(3), "d0", &mut p),
        cap: positive(k.cap.unwrap_or(2000), "cap", &mut p),
        replicates: positive(k.replicates.unwrap_or(10), "replicates", &mut p),
        bins: k.bins.unwrap_or(3),
    };
    let workers = match k.workers {
        Some(w) => positive(w, "workers", &mut p),
        None => default_workers()?,
    };
    if let Some(n) = k.mc {
        if n < 1000 {
            p.0.push("--mc: at least 1000 samples".into());
        }
    }
    if !p.0.is_empty() {
        return Err(Error::Config(p.0));
    }
    Ok(RunConfig {
        command,
        units: units.unwrap_or(Units::Nats),
        seed: k.seed.unwrap_or(0),
        out: k.out.clone(),
        workers,
        betas,
        vector_betas,
        r_grid,
        allocation,
        schemes,
        mc: k.mc,
        mc_samples: k.mc.unwrap_or(20_000),
        chain_rule: k.chain_rule,
        solver,
        mnist,
        warnings,
    })
}

/// Parses `argv` (program name first) and an optional `--config` file.
///
/// `Ok(None)` means help or version text was printed.
pub fn parse_config<I, T>(argv: I) -> Result<Option<RunConfig>>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => resolve(cli.command, &cli.knobs).map(Some),
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            print!("{e}");
            Ok(None)
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            Err(Error::Config(vec![first.to_string()]))
        }
    }
}

/// Rows of one run plus an optional summary for the sidecar.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunOutput {
    pub rows: Vec<Row>,
    pub summary: Option<serde_json::Value>,
    pub warnings: Vec<String>,
}

/// Executes a resolved configuration on a pool of `config.workers` threads.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Numeric(format!("cannot start worker pool: {e}")))?;
    pool.install(|| commands::dispatch(config))
}

#[derive(Serialize)]
struct Sidecar<'a> {
    config: &'a RunConfig,
    version: &'static str,
    wall_time_s: f64,
    rows: usize,
    warnings: &'a [String],
    summary: &'a Option<serde_json::Value>,
}

/// Runs and writes the CSV (and sidecar when writing to a file).
pub fn execute(config: &RunConfig) -> Result<RunOutput> {
    let start = Instant::now();
    let output = run(config)?;
    let csv = render_csv(&output.rows);
    let mut warnings = config.warnings.clone();
    warnings.extend(output.warnings.iter().cloned());
    for w in &warnings {
        eprintln!("gmib: warning: {w}");
    }
    match &config.out {
        Some(path) => {
            output::write_file(path, csv.as_bytes())?;
            let sidecar = Sidecar {
                config,
                version: env!("CARGO_PKG_VERSION"),
                wall_time_s: start.elapsed().as_secs_f64(),
                rows: output.rows.len(),
                warnings: &warnings,
                summary: &output.summary,
            };
            let json = serde_json::to_string_pretty(&sidecar).map_err(|e| Error::Numeric(e.to_string()))?;
            output::write_file(&sidecar_path(path), json.as_bytes())?;
        }
        None => print!("{csv}"),
    }
    Ok(output)
}

/// Entry point of the binary; returns the process exit status.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = parse_config(argv).and_then(|c| match c {
        Some(config) => execute(&config).map(|_| ()),
        None => Ok(()),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("gmib: {e}");
            e.exit_code()
        }
    }
}
