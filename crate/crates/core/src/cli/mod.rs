//! The `loop-toda` command line: `evaluate`, `dress`, `verify`, `compare`.

pub mod commands;
pub mod config;
pub mod output;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::error::TodaError;
use commands::{
    compare_report, dress_rows, evaluate_rows, output_alphas, verify_report, ClosedForm, CompareFile, DeterminantFile,
    FieldFile, VerifySettings, COMPARE_TOLERANCE, VERSION,
};
use config::{Format, RunConfig, ValidatedRun};
use output::{emit, rows_to_csv, to_json, write_atomic, FieldRow};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_LAMBDA_SAMPLES: usize = 8;
pub const DEFAULT_INVARIANT_POINTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn from_toda(e: TodaError) -> Self {
        match e {
            TodaError::DegenerateParameters { .. } => CliError::Degenerate(e.to_string()),
            TodaError::InvalidClass(_)
            | TodaError::InvalidSpec(_)
            | TodaError::OutOfRange { .. }
            | TodaError::Dimension(_) => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }

    /// Prefix the message with the config field it came from.
    pub fn in_field(self, name: &str) -> Self {
        match self {
            CliError::Config(m) => CliError::Config(format!("{name}: {m}")),
            CliError::Degenerate(m) => CliError::Degenerate(format!("{name}: {m}")),
            other => other,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Degenerate(_) => 3,
            _ => 2,
        }
    }
}

impl From<TodaError> for CliError {
    fn from(e: TodaError) -> Self {
        CliError::from_toda(e)
    }
}

#[derive(Debug, Parser)]
#[command(name = "loop-toda", version, about = "Soliton solutions of abelian twisted loop Toda systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form fields on the grid (at most two solitons).
    Evaluate(CommonArgs),
    /// Fields from the dressing on the grid, any number of solitons.
    Dress(CommonArgs),
    /// Residuals and structural checks; exits 1 if any fails.
    Verify(CommonArgs),
    /// Deviation of the dressing from the closed forms; exits 1 above tolerance.
    Compare(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON run config.
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub lambda_samples: Option<usize>,
}

/// Config with command-line overrides applied.
struct Resolved {
    run: ValidatedRun,
    out: Option<PathBuf>,
    format: Format,
    seed: u64,
    tolerance: Option<f64>,
    lambda_samples: usize,
    invariant_points: usize,
}

fn resolve(args: &CommonArgs) -> Result<Resolved, CliError> {
    let mut cfg = RunConfig::load(&args.config)?;
    if args.tolerance.is_some() {
        cfg.options.tolerance = args.tolerance;
    }
    let run = cfg.validate()?;
    let o = &run.options;
    let lambda_samples = args.lambda_samples.or(o.lambda_samples).unwrap_or(DEFAULT_LAMBDA_SAMPLES);
    if lambda_samples == 0 {
        return Err(CliError::Config("lambda_samples: must be at least 1".into()));
    }
    Ok(Resolved {
        out: args.out.clone().or_else(|| o.out.clone()),
        format: args.format.or(o.format).unwrap_or(Format::Csv),
        seed: args.seed.or(o.seed).unwrap_or(DEFAULT_SEED),
        tolerance: o.tolerance,
        lambda_samples,
        invariant_points: o.invariant_points.unwrap_or(DEFAULT_INVARIANT_POINTS),
        run,
    })
}

fn field_bytes(r: &Resolved, command: &'static str, rows: &[FieldRow]) -> Result<Vec<u8>, CliError> {
    match r.format {
        Format::Csv => Ok(rows_to_csv(rows)),
        Format::Json => {
            let class = r.run.spec.class();
            to_json(&FieldFile {
                version: VERSION,
                command,
                kind: class.kind(),
                s: class.s(),
                alphas: output_alphas(&class),
                rows,
            })
        }
    }
}

/// Sidecar path for determinant diagnostics: `<out>.det.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".det.json");
    PathBuf::from(name)
}

/// Run one command and return the process exit code.
pub fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Evaluate(args) => {
            let r = resolve(&args)?;
            let rows = evaluate_rows(&r.run.spec, &r.run.grid)?;
            emit(r.out.as_deref(), &field_bytes(&r, "evaluate", &rows)?)?;
            Ok(0)
        }
        Command::Dress(args) => {
            let r = resolve(&args)?;
            let (rows, dets) = dress_rows(&r.run.spec, &r.run.grid)?;
            emit(r.out.as_deref(), &field_bytes(&r, "dress", &rows)?)?;
            if let Some(out) = &r.out {
                let sidecar = DeterminantFile {
                    version: VERSION,
                    alphas: (1..=2 * r.run.spec.class().s()).collect(),
                    points: &dets,
                };
                write_atomic(&sidecar_path(out), &to_json(&sidecar)?)?;
            }
            Ok(0)
        }
        Command::Verify(args) => {
            let r = resolve(&args)?;
            let settings = VerifySettings {
                seed: r.seed,
                lambda_samples: r.lambda_samples,
                invariant_points: r.invariant_points,
                tolerance: r.tolerance,
            };
            let report = verify_report(&r.run.spec, &r.run.grid, &settings)?;
            emit(r.out.as_deref(), &to_json(&report)?)?;
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Compare(args) => {
            let r = resolve(&args)?;
            let closed = ClosedForm::from_spec(&r.run.spec)?;
            let tolerance = r.tolerance.unwrap_or(COMPARE_TOLERANCE);
            let report = compare_report(&r.run.spec, &closed, &r.run.grid, tolerance)?;
            let passed = report.passed;
            let file = CompareFile {
                version: VERSION,
                command: "compare",
                report,
                passed,
            };
            emit(r.out.as_deref(), &to_json(&file)?)?;
            Ok(if passed { 0 } else { 1 })
        }
    }
}
