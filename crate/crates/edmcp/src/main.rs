//! `edmcp`: generate translated distance matrices, factorize, verify and search.

mod commands;
mod error;
mod json;
mod search;

use std::process::ExitCode;

use clap::Parser;

use commands::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("edmcp: {e}");
            ExitCode::from(e.code())
        }
    }
}
