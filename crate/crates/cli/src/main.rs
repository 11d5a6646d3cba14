use std::process::ExitCode;

use clap::Parser;
use gsearch_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match gsearch_cli::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
