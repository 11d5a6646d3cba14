use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "gsearch",
    version,
    about = "Generalized Grover search: iterative and closed-form engines"
)]
pub struct Cli {
    /// TOML file with default values for any flag; explicit flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate the search step and record k̄, l̄, P(t) and the norm per step.
    Simulate(SimulateArgs),
    /// Closed-form solution scalars and optimal measurement plans.
    Predict(PredictArgs),
    /// Run both engines and report how far they disagree.
    Compare(CompareArgs),
    /// Plan over a grid of sizes, marked counts, distributions and seeds.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistName {
    Uniform,
    Delta,
    RandomReal,
    RandomComplex,
    GaussianReal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// Where the initial state comes from: a file, or a generated distribution.
#[derive(Debug, Default, Args)]
pub struct StateArgs {
    /// Database size N.
    #[arg(long)]
    pub n: Option<u64>,
    /// Number of marked states; marks indices 0..r unless --marked is given.
    #[arg(long)]
    pub r: Option<u64>,
    /// Explicit marked indices.
    #[arg(long, value_delimiter = ',')]
    pub marked: Option<Vec<u64>>,
    #[arg(long, value_enum)]
    pub dist: Option<DistName>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Target index for --dist delta.
    #[arg(long)]
    pub delta_index: Option<u64>,
    /// Mean for --dist gaussian-real, before normalization.
    #[arg(long, allow_hyphen_values = true)]
    pub mean: Option<f64>,
    /// Spread for --dist gaussian-real, before normalization.
    #[arg(long)]
    pub spread: Option<f64>,
    /// Read the initial state from a JSON document instead.
    #[arg(long, value_name = "PATH")]
    pub state: Option<PathBuf>,
    /// Rescale an ingested state whose norm is off instead of rejecting it.
    #[arg(long)]
    pub renormalize: bool,
    /// Admit N/2 < r < N.
    #[arg(long)]
    pub allow_large_r: bool,
}

#[derive(Debug, Default, Args)]
pub struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long)]
    pub steps: Option<u64>,
    /// Allowed norm drift over the run.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Branch index for the attached measurement plan.
    #[arg(long)]
    pub j: Option<u64>,
    /// Also draw one basis index from the final |amplitude|², seeded by --seed.
    #[arg(long)]
    pub sample: bool,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Initial marked average, `re` or `re,im`. Selects scalar-only mode.
    #[arg(long, allow_hyphen_values = true)]
    pub kbar0: Option<String>,
    /// Initial unmarked average, `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub lbar0: Option<String>,
    /// Initial unmarked variance σ_l².
    #[arg(long)]
    pub sigma_l_sq: Option<f64>,
    /// Branch indices to plan for.
    #[arg(long, value_delimiter = ',')]
    pub j: Option<Vec<u64>>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long)]
    pub steps: Option<u64>,
    /// Largest accepted elementwise deviation between the engines.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sizes: integers, `2^k`, or ranges of powers `2^a..2^b`.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<String>>,
    /// Marked counts: integers or fractions of N such as `n/8`.
    #[arg(long, value_delimiter = ',')]
    pub r: Option<Vec<String>>,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub dist: Option<Vec<DistName>>,
    /// First seed of each random ensemble.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Ensemble size for random distributions.
    #[arg(long)]
    pub seeds: Option<u64>,
    #[arg(long)]
    pub mean: Option<f64>,
    #[arg(long)]
    pub spread: Option<f64>,
    #[arg(long)]
    pub allow_large_r: bool,
    /// Largest accepted gap between predicted and iterated success probability.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}
