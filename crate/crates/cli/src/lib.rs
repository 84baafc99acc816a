//! Command-line front end for `monolab`.

pub mod args;
pub mod commands;
pub mod error;
pub mod verify;

use args::{Cli, Command};
use error::CliResult;

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Analyze(a) => commands::run_analyze(a),
        Command::Sweep(a) => commands::run_sweep(a),
        Command::Copies(a) => commands::run_copies(a),
        Command::Chain(a) => commands::run_chain(a),
        Command::Verify(a) => verify::run_verify(a),
    }
}
