//! # `pihier`
//!
//! Command-line front end for the Painlevé I hierarchy laboratory: symbolic
//! equations, g-function certificates, pole-free solutions, small-dispersion KdV
//! runs and the double-scaling comparison, plus the acceptance suite.
//!
//! Exit codes: 0 on success, 1 when acceptance criteria fail, 2 on invalid input,
//! 3 when a solver fails. Every failure also prints a JSON error record on stderr.

mod args;
mod commands;
mod config;
mod error;
mod manifest;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use error::{schema, CliError};

fn fail(e: &CliError) -> ExitCode {
    eprint!("{}", output::to_json(&e.record()));
    ExitCode::from(e.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => {
            eprint!("{}", e.render());
            return fail(&schema(e.kind().to_string()));
        }
    };
    if let Some(jobs) = cli.jobs {
        let built = if jobs == 0 {
            Err(schema("--jobs must be at least 1"))
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build_global()
                .map_err(|e| schema(e.to_string()))
        };
        if let Err(e) = built {
            return fail(&e);
        }
    }
    match commands::execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
