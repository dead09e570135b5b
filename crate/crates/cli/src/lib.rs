//! Experiment runner behind the `qsc` binary.
//!
//! Every command resolves an [`ExperimentConfig`], runs against the
//! `qscode` library and returns a [`Report`] with fixed columns. Reports are
//! a pure function of the configuration; only `wall_time_seconds` varies.

mod commands;
pub mod report;

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use report::Report;

#[derive(Debug, Parser)]
#[command(name = "qsc", version, about = "Pure-state encoding experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub args: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Monte Carlo volume of a ball around a pure state.
    Volume,
    /// Ball volumes around rank-two centers in d = 4 against the closed-form bound.
    Fig3,
    /// Build an internal covering and write it to --book.
    CoveringBuild,
    /// Sampled coverage of the code book in --book.
    CoveringVerify,
    /// Encode Haar-random targets deterministically and probabilistically.
    Encode,
    /// Sampled check of the trace-distance/fidelity minimax identity.
    Minimax,
    /// Farthest-state geometry of the six Pauli eigenstates.
    Octahedron,
    /// Probabilistic encoding with a sqrt(eps)-covering.
    Halving,
    /// Covering-number and bit-length bounds.
    Bounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Hilbert-space dimension.
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Falls back to $QSC_SEED, then to 7.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1, global = true)]
    pub workers: usize,
    /// Report destination; stdout when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Code-book file (JSON).
    #[arg(long, global = true)]
    pub book: Option<PathBuf>,
    /// Ratio eps_R / eps_P of the covering construction.
    #[arg(long, global = true)]
    pub x: Option<f64>,
    /// Consecutive packing rejections before the construction stops.
    #[arg(long, global = true)]
    pub fail_streak: Option<usize>,
    /// Duality-gap tolerance of the probabilistic encoder.
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub tol: f64,
    #[arg(long, default_value_t = 5000, global = true)]
    pub max_iter: usize,
    /// Refinement restarts for minimax.
    #[arg(long, default_value_t = 100, global = true)]
    pub restarts: usize,
}

/// Fully resolved configuration, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub dim: usize,
    pub epsilon: f64,
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub book: Option<PathBuf>,
    pub x: Option<f64>,
    pub fail_streak: Option<usize>,
    pub tol: f64,
    pub max_iter: usize,
    pub restarts: usize,
}

const DEFAULT_SEED: u64 = 7;

fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("QSC_SEED") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .with_context(|| format!("QSC_SEED must be an unsigned integer, got {v:?}")),
        _ => Ok(DEFAULT_SEED),
    }
}

struct Defaults {
    dim: usize,
    epsilon: f64,
    samples: usize,
}

fn defaults(command: Command) -> Defaults {
    let (dim, epsilon, samples) = match command {
        Command::Volume => (3, 0.5, 1_000_000),
        Command::Fig3 => (4, 0.5, 1_000_000),
        Command::CoveringBuild => (2, 0.5, 1),
        Command::CoveringVerify => (2, 0.5, 100_000),
        Command::Encode => (2, 0.5, 10),
        Command::Minimax => (2, 0.5, 2000),
        Command::Octahedron => (2, 0.5, 1),
        Command::Halving => (2, 0.25, 10_000),
        Command::Bounds => (4, 0.25, 1),
    };
    Defaults { dim, epsilon, samples }
}

impl ExperimentConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let a = &cli.args;
        let d = defaults(cli.command);
        // Coverage is checked at the book's own radius unless overridden.
        let epsilon = match (a.epsilon, cli.command, &a.book) {
            (Some(e), _, _) => e,
            (None, Command::CoveringVerify, Some(path)) => commands::load_book(path)?.radius(),
            _ => d.epsilon,
        };
        let config = Self {
            command: cli.command,
            dim: a.dim.unwrap_or(d.dim),
            epsilon,
            samples: a.samples.unwrap_or(d.samples),
            seed: resolve_seed(a.seed)?,
            workers: a.workers,
            output_path: a.output.clone(),
            format: a.format,
            book: a.book.clone(),
            x: a.x,
            fail_streak: a.fail_streak,
            tol: a.tol,
            max_iter: a.max_iter,
            restarts: a.restarts,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 1 {
            bail!("--samples must be at least 1");
        }
        if self.workers < 1 {
            bail!("--workers must be at least 1");
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            bail!("--epsilon must lie in (0, 1], got {}", self.epsilon);
        }
        if self.dim < 1 {
            bail!("--dim must be at least 1");
        }
        if !(self.tol > 0.0) {
            bail!("--tol must be positive");
        }
        match (self.command, &self.book) {
            (Command::CoveringBuild, None) => bail!("covering-build needs --book"),
            (Command::CoveringVerify, None) => bail!("covering-verify needs --book"),
            _ => {}
        }
        Ok(())
    }
}

/// Runs the configured experiment. Writing the report is left to the caller;
/// `covering-build` also writes the code book to `--book`.
pub fn run(config: &ExperimentConfig) -> Result<Report> {
    let start = std::time::Instant::now();
    let mut report = commands::dispatch(config)?;
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}
