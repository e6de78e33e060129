//! Command-line front end for `isotangle`.
//!
//! Subcommands:
//!
//! - `curve` tabulates measures of isotropic states on a fidelity grid and
//!   writes CSV or SVG,
//! - `render` turns a CSV table back into SVG,
//! - `verify` runs a verification suite and prints a table of checks,
//! - `point` prints every measure at one fidelity.
//!
//! Exit status is 0 on success, 1 when a verification check fails and 2 on
//! usage errors.

pub mod config;
pub mod error;
pub mod point;
pub mod svg;
pub mod table;
pub mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{resolve, Config};
use error::{CliError, CliResult};
use table::{CurveRequest, Grid, MeasureSpec, Table};
use verify::{run_suite, Suite, VerifySettings};

#[derive(Debug, Parser)]
#[command(name = "isotangle", version, about = "Tangle, concurrence and entanglement of formation of isotropic states")]
pub struct Cli {
    /// Plain-text key = value file; flags override its entries.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate measures on a fidelity grid.
    Curve(CurveArgs),
    /// Re-render a CSV table as SVG.
    Render(RenderArgs),
    /// Run a verification suite (closed-form, oracle, roof, all).
    Verify(VerifyArgs),
    /// Print every measure at one fidelity.
    Point(PointArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            _ => Err(CliError::usage(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Dimensions, comma separated.
    #[arg(long = "d", value_delimiter = ',')]
    pub d: Vec<usize>,
    /// Measures: csquared, cfunc, tangle, concurrence, eof, branch:N,M, cbranch:N,M.
    #[arg(long, num_args = 1..)]
    pub measures: Vec<String>,
    /// Derivative orders for csquared and cfunc, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub derivative: Vec<u8>,
    #[arg(long)]
    pub from: Option<f64>,
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// CSV file written by `curve`.
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// closed-form, oracle, roof or all.
    #[arg(default_value = "all")]
    pub suite: String,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also print per-check runtimes.
    #[arg(long)]
    pub timings: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long = "d")]
    pub d: usize,
    /// Fidelity with the maximally entangled state.
    #[arg(long = "fidelity", visible_alias = "f")]
    pub fidelity: f64,
}

/// How a successful invocation ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    ChecksFailed,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::ChecksFailed => 1,
        }
    }
}

/// Exit status for an error.
pub fn error_exit_code(_: &CliError) -> u8 {
    2
}

fn emit(bytes: &[u8], out: Option<&Path>, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => stdout.write_all(bytes).map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

/// Builds a [`CurveRequest`] from flags, then config, then defaults.
pub fn curve_request(args: &CurveArgs, config: &Config) -> CliResult<CurveRequest> {
    let ds = if args.d.is_empty() { config.list("d")?.unwrap_or_else(|| vec![3]) } else { args.d.clone() };
    let names: Vec<String> = if args.measures.is_empty() {
        config
            .raw("measures")
            .map(|v| v.split_whitespace().map(str::to_string).collect())
            .unwrap_or_else(|| vec!["tangle".to_string()])
    } else {
        args.measures.clone()
    };
    let measures = names.iter().map(|m| m.parse()).collect::<CliResult<Vec<MeasureSpec>>>()?;
    let derivatives =
        if args.derivative.is_empty() { config.list("derivative")?.unwrap_or_else(|| vec![0]) } else { args.derivative.clone() };
    let grid = Grid {
        from: resolve(args.from, config, "from", 0.0)?,
        to: resolve(args.to, config, "to", 1.0)?,
        step: resolve(args.step, config, "step", 1e-3)?,
    };
    Ok(CurveRequest { ds, measures, derivatives, grid })
}

fn cmd_curve(args: &CurveArgs, config: &Config, stdout: &mut dyn Write) -> CliResult<Outcome> {
    let request = curve_request(args, config)?;
    let format = resolve(args.format, config, "format", Format::Csv)?;
    let table = request.tabulate()?;
    let bytes = match format {
        Format::Csv => table.to_csv_string()?.into_bytes(),
        Format::Svg => svg::render(&table).into_bytes(),
    };
    emit(&bytes, args.out.as_deref(), stdout)?;
    Ok(Outcome::Success)
}

fn cmd_render(args: &RenderArgs, stdout: &mut dyn Write) -> CliResult<Outcome> {
    let file = std::fs::File::open(&args.input).map_err(|source| CliError::Io { path: args.input.display().to_string(), source })?;
    let table = Table::read_csv(file)?;
    emit(svg::render(&table).as_bytes(), args.out.as_deref(), stdout)?;
    Ok(Outcome::Success)
}

fn cmd_verify(args: &VerifyArgs, config: &Config, stdout: &mut dyn Write) -> CliResult<Outcome> {
    let suite: Suite = args.suite.parse()?;
    let defaults = VerifySettings::default();
    let settings = VerifySettings {
        seed: resolve(args.seed, config, "seed", defaults.seed)?,
        oracle_restarts: resolve(None, config, "oracle.restarts", defaults.oracle_restarts)?,
        roof_restarts: resolve(None, config, "roof.restarts", defaults.roof_restarts)?,
        ensemble_size: resolve(None, config, "roof.ensemble_size", defaults.ensemble_size)?,
        tolerance_scale: resolve(None, config, "verify.tolerance_scale", defaults.tolerance_scale)?,
    };
    if settings.oracle_restarts == 0 || settings.roof_restarts == 0 {
        return Err(CliError::usage("restart counts must be positive"));
    }
    let report = run_suite(suite, &settings);
    emit(report.render(args.timings).as_bytes(), args.out.as_deref(), stdout)?;
    Ok(if report.passed() { Outcome::Success } else { Outcome::ChecksFailed })
}

fn cmd_point(args: &PointArgs, stdout: &mut dyn Write) -> CliResult<Outcome> {
    let report = point::point(args.d, args.fidelity)?;
    emit(report.render().as_bytes(), None, stdout)?;
    Ok(Outcome::Success)
}

/// Runs a parsed command line, writing normal output to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> CliResult<Outcome> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    match &cli.command {
        Command::Curve(a) => cmd_curve(a, &config, stdout),
        Command::Render(a) => cmd_render(a, stdout),
        Command::Verify(a) => cmd_verify(a, &config, stdout),
        Command::Point(a) => cmd_point(a, stdout),
    }
}
