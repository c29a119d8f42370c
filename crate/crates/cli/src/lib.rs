//! Command-line front end: region queries, schedules, Gaussian verification
//! and sweeps, all emitting machine-readable reports.
//!
//! Exit codes are shared by every command: 0 success or member, 2 input
//! error, 3 infeasible or non-member, 4 low-power side condition, 1 for
//! internal failures.

pub mod commands;
pub mod netfile;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use relaynet::cutset::CutsetError;
use relaynet::detnet::DetError;
use relaynet::gaussian::GaussError;
use relaynet::scheduler::{ScheduleError, StrategyRegistry};
use thiserror::Error;

pub use commands::run;
pub use report::Report;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;
pub const EXIT_SIDE_CONDITION: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Cutset(#[from] CutsetError),
    #[error(transparent)]
    Det(#[from] DetError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("{}", gauss_message(.0))]
    Gauss(#[from] GaussError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

fn gauss_message(e: &GaussError) -> String {
    match e {
        GaussError::Hypothesis { .. } => format!("theorem-2 hypothesis: {e}"),
        GaussError::LowPower { .. } => format!("side-condition: {e}"),
        _ => e.to_string(),
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io { .. } | CliError::Cutset(_) | CliError::Det(_) => {
                EXIT_INPUT
            }
            CliError::Schedule(e) => match e {
                ScheduleError::NotInRegion { .. } | ScheduleError::NonIntegral => EXIT_INFEASIBLE,
                ScheduleError::UnknownStrategy(_)
                | ScheduleError::Cutset(_)
                | ScheduleError::Det(_) => EXIT_INPUT,
                _ => EXIT_INTERNAL,
            },
            CliError::Gauss(e) => match e {
                GaussError::Hypothesis { .. }
                | GaussError::NotInRegion { .. }
                | GaussError::Infeasible { .. } => EXIT_INFEASIBLE,
                GaussError::LowPower { .. } => EXIT_SIDE_CONDITION,
                _ => EXIT_INPUT,
            },
            CliError::Csv(_) | CliError::Json(_) => EXIT_INTERNAL,
        }
    }
}

/// What a command produced: a report, an exit code, and for sweeps a
/// one-line summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub exit: u8,
    pub summary: Option<String>,
}

#[derive(Debug, Parser)]
#[command(
    name = "relaynet",
    version,
    about = "Capacity regions and relaying schemes for bidirectional relay networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a rate tuple against the cut-set region of a network.
    Region(RegionArgs),
    /// Build a level schedule for a deterministic network.
    Schedule(ScheduleArgs),
    /// Verify that a tuple two bits inside the restricted region is achieved.
    GaussVerify(GaussVerifyArgs),
    /// Randomized verification sweep.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundArg {
    General,
    Restricted,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    /// Network file.
    pub network: PathBuf,
    /// Comma-separated rates: `p/q` fractions for deterministic networks,
    /// decimals for Gaussian ones.
    #[arg(long, allow_hyphen_values = true)]
    pub rates: String,
    /// Override the duplex mode: relay listens this fraction, `p/q`.
    #[arg(long, value_name = "P/Q")]
    pub half_duplex: Option<String>,
    /// Which Gaussian region decides the exit code.
    #[arg(long, value_enum, default_value = "general")]
    pub bound: BoundArg,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    pub network: PathBuf,
    #[arg(long)]
    pub rates: String,
    /// Registered level-assignment strategy.
    #[arg(long, default_value = StrategyRegistry::DEFAULT)]
    pub strategy: String,
    /// Shorthand for `--strategy chunked`.
    #[arg(long, conflicts_with = "strategy")]
    pub chunked: bool,
    /// Simulate this many random payloads.
    #[arg(long, default_value_t = 0)]
    pub simulate: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_name = "P/Q")]
    pub half_duplex: Option<String>,
}

#[derive(Debug, Args)]
pub struct GaussVerifyArgs {
    pub network: PathBuf,
    /// `R_A1,R_B1,R_A2,R_B2`.
    #[arg(long)]
    pub rates: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RatesArg {
    Boundary,
    Interior,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub hmin: f64,
    #[arg(long, default_value_t = 100.0)]
    pub hmax: f64,
    #[arg(long, default_value_t = 4.0)]
    pub pmin: f64,
    #[arg(long, default_value_t = 100.0)]
    pub pmax: f64,
    /// Where rate tuples are placed along each sampled ray.
    #[arg(long, value_enum, default_value = "boundary")]
    pub rates: RatesArg,
    /// Per-trial CSV output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON report output.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Sweep deterministic networks for schedule completeness instead.
    #[arg(long)]
    pub det: bool,
    #[arg(long, default_value_t = 3)]
    pub max_pairs: usize,
    #[arg(long, default_value_t = 6)]
    pub max_gain: u32,
    #[arg(long, default_value = StrategyRegistry::DEFAULT)]
    pub strategy: String,
}
