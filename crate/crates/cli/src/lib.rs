//! Command-line front end for the `ihara` library.
//!
//! [`run`] parses an argument vector, executes one subcommand and returns
//! the process exit code: 0 on success, 1 for usage and input errors, 2
//! for numerical failures, resource limits and failed checks. Stdout gets
//! a one-line JSON summary either way.

// `!(x < tol)` is how NaN gets rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod run;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

pub use args::Cli;
pub use commands::SIZE_CAP_VAR;
pub use run::{CliError, Run};

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match execute(cli) {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            println!("{}", json!({ "status": "error", "kind": e.kind(), "message": e.to_string() }));
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<String, CliError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Input("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Failure(format!("cannot start {jobs} workers: {e}")))?;
    }
    commands::dispatch(cli.command, cli.manifest)
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
