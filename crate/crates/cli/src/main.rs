//! `dodeuri` - analyze Jeongganbo scores as weighted note networks with
//! persistent-homology cycle detection.
//!
//! Exit codes: 0 success, 1 usage error, 2 parse error, 3 analysis error.

mod commands;

use std::process::ExitCode;

use clap::Parser;

use commands::{Cli, CommandOutcome};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version through the error path too
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CommandOutcome::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CommandOutcome::Parse(msg)) => {
            eprintln!("parse error: {msg}");
            ExitCode::from(2)
        }
        Err(CommandOutcome::Analysis(msg)) => {
            eprintln!("analysis error: {msg}");
            ExitCode::from(3)
        }
    }
}
