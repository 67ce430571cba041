//! Library side of the `mine` binary: argument model, input parsing, job
//! execution and result documents. `main.rs` only maps the outcome to an exit code.

pub mod args;
pub mod document;
pub mod input;
pub mod jobs;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use args::Cli;
pub use document::{JobConfig, JobResult, ResultDocument, SCHEMA_VERSION};

/// A failure with the exit code it maps to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 2,
            CliError::Invalid(_) => 3,
        }
    }
}

impl From<varmine::Error> for CliError {
    fn from(e: varmine::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

/// Parses `argv`, runs the job and writes its document. Returns the exit code;
/// diagnostics go to `stderr` as a single line.
pub fn run<I, T>(argv: I, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
        }
    };
    match jobs::execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "mine: {e}");
            e.exit_code()
        }
    }
}
