//! `qosc` — simulate, validate, transform and sweep quadratic-Hamiltonian oscillators.
//!
//! Exit codes: 0 success, 1 validation failure, 2 invalid input (flags, config, files,
//! parameters), 3 integration failure or degenerate transform.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use table::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Output(String),
    #[error(transparent)]
    Core(#[from] qosc::Error),
    #[error("validation failed")]
    ValidationFailed,
}

impl CliError {
    pub fn output(e: impl std::fmt::Display) -> Self {
        CliError::Output(e.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        use qosc::Error as E;
        match self {
            CliError::ValidationFailed => 1,
            CliError::Input(_) | CliError::Output(_) => 2,
            CliError::Core(
                E::InvalidGrid(_) | E::InvalidParameter(_) | E::UnsupportedDrive { .. } | E::TimeMismatch { .. },
            ) => 2,
            CliError::Core(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qosc",
    version,
    about = "Quadratic Hamiltonians through the classical complex oscillator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate a scenario and write the per-sample time series.
    Simulate(SimulateArgs),
    /// Cross-check the waveguide integration against its closed form; exit 1 on failure.
    Validate(ValidateArgs),
    /// Map a series between the oscillator and one of its equivalent forms.
    Transform(TransformArgs),
    /// One validation summary row per squeeze parameter.
    Sweep(SweepArgs),
}

/// Flags shared by every subcommand; each may also come from `--config`.
#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    /// [default: 1]
    #[arg(long)]
    pub hbar: Option<f64>,
    /// [default: 0]
    #[arg(long)]
    pub t_start: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Output spacing [default: 0.01]
    #[arg(long)]
    pub step: Option<f64>,
    /// [default: 1e-10]
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// [default: 1e-12]
    #[arg(long)]
    pub abs_tol: Option<f64>,
    /// Output file (stdout if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// [default: csv]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Flat key=value file mirroring the long flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ScenarioKind {
    Waveguide,
    Stationary,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// [default: waveguide]
    #[arg(long, value_enum)]
    pub scenario: Option<ScenarioKind>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Tighten every default tolerance ×0.01 (explicit --tol-* values are kept as given).
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub tol_ode: Option<f64>,
    #[arg(long)]
    pub tol_wronskian: Option<f64>,
    #[arg(long)]
    pub tol_fluct: Option<f64>,
    #[arg(long)]
    pub tol_omega: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Form {
    Epsilon,
    Riccati,
    Mass,
    HamiltonPair,
    Ermakov,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct TransformArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub from: Option<Form>,
    #[arg(long, value_enum)]
    pub to: Option<Form>,
    /// Input CSV with a header row.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Reference `m₀ω₀` of the Riccati linearization [default: 1].
    #[arg(long)]
    pub m0omega0: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// `lo:hi:step`, inclusive.
    #[arg(long)]
    pub s_range: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Validate(a) => commands::validate(a),
        Command::Transform(a) => commands::transform(a),
        Command::Sweep(a) => commands::sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::ValidationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qosc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
