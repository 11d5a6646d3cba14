//! Command-line harness: `simulate`, `predict`, `compare` and `sweep`.
//!
//! Exit codes: 0 on success, 1 when an invariant or engine-agreement check
//! fails, 2 for invalid arguments or inputs.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod settings;

use args::{Cli, Command};
use error::CliResult;
use settings::FileConfig;

pub fn run(cli: &Cli) -> CliResult<()> {
    let file = FileConfig::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Simulate(a) => commands::run_simulate(a, &file),
        Command::Predict(a) => commands::run_predict(a, &file),
        Command::Compare(a) => commands::run_compare(a, &file),
        Command::Sweep(a) => commands::run_sweep(a, &file),
    }
}
