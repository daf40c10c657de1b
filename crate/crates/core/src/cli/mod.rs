//! Batch front end: `refinv <command> [flags]`.
//!
//! Exit codes: 0 when every check passes, 1 when a residual exceeds its
//! tolerance, 2 on usage or input errors.

mod args;
mod commands;
mod io;
mod report;
mod suites;

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::Parser;
use thiserror::Error;

pub use args::{Cli, Command, ModeArg, Suite, TGrid};
pub use report::{Check, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{file}: field `{field}`: {message}")]
    Input {
        file: String,
        field: String,
        message: String,
    },
    #[error("usage: {0}")]
    Usage(String),
    #[error("computation failed: {0}")]
    Compute(String),
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        source: std::io::Error,
    },
}

/// Rendered command output and whether its checks passed.
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(e) => {
            eprintln!("refinv: {e}");
            EXIT_USAGE
        }
    }
}

/// Runs a parsed command, writing its output; `Ok(false)` when a check failed.
pub fn execute(cli: &Cli) -> Result<bool, CliError> {
    let (outcome, out) = match &cli.command {
        Command::Fundamental(a) => (commands::fundamental(a)?, &a.output),
        Command::Invariant(a) => (commands::invariant(a)?, &a.output),
        Command::Closure(a) => (commands::closure(a)?, &a.output),
        Command::ComplexSolve(a) => (commands::complex_solve(a)?, &a.output),
        Command::Verify(a) => (commands::verify(a)?, &a.output),
    };
    match &out.out {
        Some(path) => fs::write(path, &outcome.text).map_err(|source| CliError::Output {
            path: path.display().to_string(),
            source,
        })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(outcome.text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Output {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
    }
    Ok(outcome.pass)
}
