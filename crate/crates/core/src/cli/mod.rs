//! Command-line front end.
//!
//! ```text
//! zeno-lab [--config FILE] [--set KEY=VALUE]... [--out DIR] [--tol REL]
//!          [--threads N] [--format csv|json] <COMMAND>
//!
//!   rate-curve    one Γ(τ) curve as CSV plus a JSON manifest
//!   figure        the curve family of a preset (--preset fig1a … fig5b)
//!   transitions   Zeno / anti-Zeno transition points as JSON
//!   oracle-check  exact truncated-bath survival against the polaron prediction
//!   sweep         Cartesian product over list-valued keys
//! ```
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error,
//! 3 numerical failure or failed oracle check, 4 dimension cap exceeded.

pub mod commands;
pub mod config;
pub mod output;
pub mod presets;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;
use commands::Context;
use config::RawConfig;
use output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "zeno-lab",
    version,
    about = "Effective decay rates of repeatedly measured spins"
)]
pub struct Cli {
    /// `key = value` configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override one configuration key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub set: Vec<String>,
    /// Output directory.
    #[arg(long, default_value = "out", global = true)]
    pub out: PathBuf,
    /// Relative quadrature tolerance (overrides `rel_tol`).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads; 0 means one per core.
    #[arg(long, env = "ZENO_LAB_THREADS", global = true)]
    pub threads: Option<usize>,
    /// Figure preset name.
    #[arg(long, global = true)]
    pub preset: Option<String>,
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    RateCurve,
    Figure {
        /// Preset name, as an alternative to --preset.
        name: Option<String>,
    },
    Transitions,
    OracleCheck,
    Sweep,
}

/// A failed command, mapped onto an exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Config(String),
    Numerical(String),
    DimensionCap(String),
    Tolerance(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Io(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numerical(_) | Failure::Tolerance(_) => 3,
            Failure::DimensionCap(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m)
            | Failure::Numerical(m)
            | Failure::DimensionCap(m)
            | Failure::Tolerance(m)
            | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidParameter(_)
            | Error::DivergentKappa { .. }
            | Error::DiscretePointwiseEval => Failure::Config(msg),
            Error::QuadratureFailure { .. }
            | Error::DegenerateNormalization
            | Error::DegenerateGrid { .. } => Failure::Numerical(msg),
            Error::DimensionCap { .. } => Failure::DimensionCap(msg),
        }
    }
}

fn raw_config(cli: &Cli) -> Result<RawConfig, Failure> {
    let mut raw = match &cli.config {
        Some(p) => RawConfig::from_file(p)?,
        None => RawConfig::default(),
    };
    for a in &cli.set {
        raw.set_assignment(a)?;
    }
    if let Some(t) = cli.tol {
        raw.set("rel_tol", &format!("{t:?}"))?;
    }
    Ok(raw)
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<(), Failure> {
    let raw = raw_config(cli)?;
    let ctx = Context {
        out: &cli.out,
        format: cli.format,
    };
    let run = || match &cli.command {
        Command::RateCurve => commands::rate_curve(&ctx, &raw),
        Command::Figure { name } => {
            let name = name
                .as_deref()
                .or(cli.preset.as_deref())
                .ok_or_else(|| Failure::Config("figure needs a preset name".into()))?;
            let preset = presets::find(name).ok_or_else(|| {
                Failure::Config(format!(
                    "unknown preset '{name}' (expected one of {})",
                    presets::names().join(", ")
                ))
            })?;
            commands::figure(&ctx, preset, &raw)
        }
        Command::Transitions => commands::transitions(&ctx, &raw),
        Command::OracleCheck => commands::oracle_check(&ctx, &raw),
        Command::Sweep => commands::sweep(&ctx, &raw),
    };
    match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Config(format!("cannot start {n} threads: {e}")))?
            .install(run),
        None => run(),
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("zeno-lab: {}", f.message());
            f.exit_code()
        }
    }
}
