//! Run configuration shared by all subcommands.

use std::path::PathBuf;

use opdist::sampler::RngSeed;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Mub,
    Distance,
    Equivalence,
    Ordering,
    Shots,
    Tomography,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Mub => "mub",
            CommandKind::Distance => "distance",
            CommandKind::Equivalence => "equivalence",
            CommandKind::Ordering => "ordering",
            CommandKind::Shots => "shots",
            CommandKind::Tomography => "tomography",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

/// How the state pair of a simulation command is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum PairKind {
    /// Two Ginibre-random mixed states.
    RandomMixed,
    /// Two Haar-random pure states.
    RandomPure,
    /// The orthogonal pure pair |0⟩⟨0|, |1⟩⟨1| (exact distance 2).
    Orthogonal,
}

impl PairKind {
    pub fn name(self) -> &'static str {
        match self {
            PairKind::RandomMixed => "random-mixed",
            PairKind::RandomPure => "random-pure",
            PairKind::Orthogonal => "orthogonal",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: CommandKind,
    pub dim: usize,
    pub seeds: Vec<RngSeed>,
    pub trials: usize,
    pub shot_counts: Vec<u64>,
    pub tolerance: f64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    /// equivalence: corrupt the basis set as a negative control.
    pub self_test: bool,
    /// ordering: skip the mixed test set.
    pub pure_only: bool,
    /// distance/shots/tomography: how the state pair is drawn.
    pub pair: PairKind,
    /// shots: subtract the estimated O(1/n) bias.
    pub bias_corrected: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.dim < 2 {
            return Err(format!("--dim must be at least 2 (got {})", self.dim));
        }
        if self.seeds.is_empty() {
            return Err("at least one --seed is required".into());
        }
        if self.trials < 1 {
            return Err("--trials must be at least 1".into());
        }
        if self.shot_counts.is_empty() {
            return Err("at least one --shots value is required".into());
        }
        if self.shot_counts.iter().any(|&n| n < 1) {
            return Err("every --shots value must be at least 1".into());
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(format!("--tol must be positive (got {})", self.tolerance));
        }
        if self.command == CommandKind::Tomography && self.dim != 2 {
            return Err(format!(
                "tomography simulates a polarization qubit; --dim must be 2 (got {})",
                self.dim
            ));
        }
        if self.command == CommandKind::Mub && self.format == OutputFormat::Csv {
            return Err("basis export is JSON-only; drop --format csv".into());
        }
        Ok(())
    }

    /// Configuration echo embedded in every output file (everything that
    /// affects the computed values).
    pub fn echo_json(&self) -> serde_json::Value {
        serde_json::json!({
            "command": self.command.name(),
            "dim": self.dim,
            "seeds": self.seeds.iter().map(|s| s.0).collect::<Vec<u64>>(),
            "trials": self.trials,
            "shots": self.shot_counts,
            "tol": self.tolerance,
            "format": self.format.name(),
            "self_test": self.self_test,
            "pure_only": self.pure_only,
            "pair": self.pair.name(),
            "bias_corrected": self.bias_corrected,
        })
    }

    /// One-line form of the echo for CSV comment headers.
    pub fn echo_line(&self) -> String {
        let seeds: Vec<String> = self.seeds.iter().map(|s| s.0.to_string()).collect();
        let shots: Vec<String> = self.shot_counts.iter().map(u64::to_string).collect();
        format!(
            "command={} dim={} seeds={} trials={} shots={} tol={:e} format={} self_test={} pure_only={} pair={} bias_corrected={}",
            self.command.name(),
            self.dim,
            seeds.join(","),
            self.trials,
            shots.join(","),
            self.tolerance,
            self.format.name(),
            self.self_test,
            self.pure_only,
            self.pair.name(),
            self.bias_corrected,
        )
    }
}
