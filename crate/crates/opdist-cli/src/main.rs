//! `opdist` — operational-distance experiments from the command line.
//!
//! Subcommands construct and verify mutually unbiased basis sets, compute
//! distance reports, check the measurement-sum route against the
//! Hilbert-Schmidt route, compare fidelity/distance orderings, and run
//! finite-shot convergence sweeps. Exit codes: 0 = success/pass, 1 = a check
//! failed, 2 = bad configuration or unsupported dimension, 3 = I/O error.

mod commands;
mod config;
mod output;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use opdist::sampler::RngSeed;

use config::{CommandKind, OutputFormat, PairKind, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Lib(opdist::Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<opdist::Error> for CliError {
    fn from(e: opdist::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(
                opdist::Error::UnsupportedDimension { .. }
                | opdist::Error::DimensionTooSmall { .. }
                | opdist::Error::NotAQubit { .. },
            ) => 2,
            CliError::Lib(_) => 1,
            CliError::Io(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "opdist",
    version,
    about = "Operational distance between quantum states over mutually unbiased measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Hilbert-space dimension.
    #[arg(long, default_value_t = 2)]
    dim: usize,

    /// RNG seed; repeat the flag for several independent runs.
    #[arg(long = "seed")]
    seeds: Vec<u64>,

    /// Number of random trials (pairs or test states).
    #[arg(long, default_value_t = 100)]
    trials: usize,

    /// Shots per measurement basis; repeat the flag for a sweep.
    #[arg(long = "shots")]
    shot_counts: Vec<u64>,

    /// Pass/fail tolerance.
    #[arg(long = "tol", default_value_t = 1e-9)]
    tolerance: f64,

    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format (default depends on the subcommand).
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Construct, verify, and export a complete set of mutually unbiased bases.
    Mub(MubArgs),
    /// Distance report for one sampled pair of states.
    Distance(DistanceArgs),
    /// Compare the measurement-sum distance with the Hilbert-Schmidt distance
    /// over random pairs and rotated basis sets.
    Equivalence(EquivalenceArgs),
    /// Compare the orderings induced by fidelity and by distance.
    Ordering(OrderingArgs),
    /// Finite-shot estimator convergence sweep.
    Shots(ShotsArgs),
    /// Polarization-tomography simulation for a qubit pair.
    Tomography(TomographyArgs),
}

#[derive(Args)]
struct MubArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct DistanceArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// How the state pair is drawn.
    #[arg(long, value_enum, default_value_t = PairKind::RandomMixed)]
    pair: PairKind,
}

#[derive(Args)]
struct EquivalenceArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Negative control: corrupt the basis set and expect the check to fail.
    #[arg(long)]
    self_test: bool,
}

#[derive(Args)]
struct OrderingArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Only run the all-pure test set (expected violation-free).
    #[arg(long)]
    pure_only: bool,
}

#[derive(Args)]
struct ShotsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// How the state pair is drawn.
    #[arg(long, value_enum, default_value_t = PairKind::RandomMixed)]
    pair: PairKind,
    /// Subtract the estimated O(1/n) bias from the plug-in estimator.
    #[arg(long)]
    bias_corrected: bool,
}

#[derive(Args)]
struct TomographyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// How the state pair is drawn.
    #[arg(long, value_enum, default_value_t = PairKind::RandomMixed)]
    pair: PairKind,
}

const DEFAULT_SHOT_SWEEP: [u64; 4] = [1_000, 10_000, 100_000, 1_000_000];

fn build_config(
    kind: CommandKind,
    common: &CommonArgs,
    default_format: OutputFormat,
    self_test: bool,
    pure_only: bool,
    pair: PairKind,
    bias_corrected: bool,
) -> RunConfig {
    let seeds = if common.seeds.is_empty() {
        vec![RngSeed(1)]
    } else {
        common.seeds.iter().copied().map(RngSeed).collect()
    };
    let shot_counts = if common.shot_counts.is_empty() {
        DEFAULT_SHOT_SWEEP.to_vec()
    } else {
        common.shot_counts.clone()
    };
    RunConfig {
        command: kind,
        dim: common.dim,
        seeds,
        trials: common.trials,
        shot_counts,
        tolerance: common.tolerance,
        out: common.out.clone(),
        format: common.format.unwrap_or(default_format),
        self_test,
        pure_only,
        pair,
        bias_corrected,
    }
}

fn run(cli: Cli) -> i32 {
    let cfg = match &cli.command {
        Command::Mub(a) => build_config(
            CommandKind::Mub,
            &a.common,
            OutputFormat::Json,
            false,
            false,
            PairKind::RandomMixed,
            false,
        ),
        Command::Distance(a) => build_config(
            CommandKind::Distance,
            &a.common,
            OutputFormat::Json,
            false,
            false,
            a.pair,
            false,
        ),
        Command::Equivalence(a) => build_config(
            CommandKind::Equivalence,
            &a.common,
            OutputFormat::Csv,
            a.self_test,
            false,
            PairKind::RandomMixed,
            false,
        ),
        Command::Ordering(a) => build_config(
            CommandKind::Ordering,
            &a.common,
            OutputFormat::Json,
            false,
            a.pure_only,
            PairKind::RandomMixed,
            false,
        ),
        Command::Shots(a) => build_config(
            CommandKind::Shots,
            &a.common,
            OutputFormat::Csv,
            false,
            false,
            a.pair,
            a.bias_corrected,
        ),
        Command::Tomography(a) => build_config(
            CommandKind::Tomography,
            &a.common,
            OutputFormat::Json,
            false,
            false,
            a.pair,
            false,
        ),
    };

    if let Err(msg) = cfg.validate() {
        eprintln!("error: {msg}");
        return 2;
    }

    let result = match cfg.command {
        CommandKind::Mub => commands::cmd_mub(&cfg),
        CommandKind::Distance => commands::cmd_distance(&cfg),
        CommandKind::Equivalence => commands::cmd_equivalence(&cfg),
        CommandKind::Ordering => commands::cmd_ordering(&cfg),
        CommandKind::Shots => commands::cmd_shots(&cfg),
        CommandKind::Tomography => commands::cmd_tomography(&cfg),
    };

    match result {
        Ok(outcome) => {
            let written = match &cfg.out {
                Some(path) => std::fs::write(path, &outcome.content),
                None => {
                    print!("{}", outcome.content);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 3;
            }
            if outcome.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn main() {
    std::process::exit(run(Cli::parse()));
}
