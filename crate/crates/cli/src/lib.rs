//! `twistor` batch front end: reads a JSON config, runs one computation and
//! writes a deterministic JSON or CSV report.
//!
//! Exit codes: 0 success (including negative verdicts), 1 configuration or
//! usage error, 2 error reported by the computation or an unwritable output.

pub mod commands;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use commands::{GltOverrides, Output};

/// Environment variable capping the worker threads of parallel sweeps.
pub const THREADS_ENV: &str = "TWISTOR_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Domain(_) => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Splitting type and cohomology of a bundle on the projective line
    BundleSplit,
    /// Check a twistor Lie algebra, or build the unipotent-radical family
    LieValidate,
    /// Degree conditions for a twistor action and its quotient
    QuotientCheck,
    /// Legendre transform at one point, optionally with a Monge-Ampère grid
    GltRun,
    /// Monge-Ampère residual over a list of deformation parameters
    GltSweep,
    /// Orbit of the O(-2) action on the charge-2 rational maps
    AhOrbit,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::BundleSplit => "bundle-split",
            Command::LieValidate => "lie-validate",
            Command::QuotientCheck => "quotient-check",
            Command::GltRun => "glt-run",
            Command::GltSweep => "glt-sweep",
            Command::AhOrbit => "ah-orbit",
        }
    }

    fn supports_csv(self) -> bool {
        matches!(self, Command::GltSweep | Command::AhOrbit)
    }
}

#[derive(Debug, Parser)]
#[command(name = "twistor", version, about = "Twistor-space computations driven by JSON configs")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// JSON payload for the command
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report destination (stdout if omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Override the Monge-Ampère grid size n (n x n points)
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Override lambda: comma-separated components, ';' between vectors
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda: Option<String>,
}

/// Parses `"a,b;c,d"` into `[[a, b], [c, d]]`. An empty string is one empty
/// vector (the k = 1 case).
pub fn parse_lambda_list(s: &str) -> Result<Vec<Vec<f64>>, CliError> {
    s.split(';')
        .map(|v| {
            let v = v.trim();
            if v.is_empty() {
                return Ok(Vec::new());
            }
            v.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| CliError::Config(format!("bad lambda component {x:?}")))
                })
                .collect()
        })
        .collect()
}

/// Thread count from [`THREADS_ENV`], if set.
pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::Config(format!("{THREADS_ENV}: {e}"))),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        },
    }
}

fn read_payload(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{} is not valid JSON: {e}", path.display())))
}

fn dispatch(command: Command, payload: &Value, ov: &GltOverrides) -> Result<Output, CliError> {
    match command {
        Command::BundleSplit => commands::bundle_split(payload),
        Command::LieValidate => commands::lie_validate(payload),
        Command::QuotientCheck => commands::quotient_check(payload),
        Command::GltRun => commands::glt_run(payload, ov),
        Command::GltSweep => commands::glt_sweep(payload, ov),
        Command::AhOrbit => commands::ah_orbit(payload),
    }
}

/// Runs one command and returns the rendered report.
pub fn execute(command: Command, payload: &Value, format: Format, ov: &GltOverrides) -> Result<String, CliError> {
    if format == Format::Csv && !command.supports_csv() {
        return Err(CliError::Config(format!("{} has no CSV output", command.name())));
    }
    let threads = threads_from_env()?;
    let output = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?
            .install(|| dispatch(command, payload, ov))?,
        None => dispatch(command, payload, ov)?,
    };
    Ok(match format {
        Format::Csv => output.table.expect("csv commands produce a table").to_csv(),
        Format::Json => {
            let mut report = output.report;
            if let Value::Object(map) = &mut report {
                map.insert("command".into(), json!(command.name()));
                map.insert("input".into(), payload.clone());
                if let Some(g) = ov.grid {
                    map.insert("override_grid".into(), json!(g));
                }
                if let Some(l) = &ov.lambda {
                    map.insert("override_lambda".into(), json!(l));
                }
            }
            report::to_json(&report)
        }
    })
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Domain(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Domain(format!("cannot write report: {e}")))
        }
    }
}

fn run_args(args: Args) -> Result<(), CliError> {
    let config = args.config.ok_or_else(|| CliError::Config("--config <path> is required".into()))?;
    let payload = read_payload(&config)?;
    let ov = GltOverrides {
        grid: args.grid,
        lambda: args.lambda.as_deref().map(parse_lambda_list).transpose()?,
    };
    let text = execute(args.command, &payload, args.format, &ov)?;
    write_output(args.out.as_deref(), &text)
}

/// Entry point shared by the binary and the tests. Returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_args(args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("twistor: {e}");
            e.exit_code()
        }
    }
}
