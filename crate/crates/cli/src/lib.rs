//! The `conelab` command line. [`run`] is the whole program minus process
//! plumbing, so tests can drive it in-process.

pub mod args;
mod commands;
pub mod input;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::Value;
use thiserror::Error;

use args::{Cli, Command};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, literals, files or environment.
    #[error("usage: {0}")]
    Usage(String),
    /// The computation itself refused the input.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failed(_) => EXIT_CHECK_FAILED,
        }
    }
}

macro_rules! failed_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Failed(e.to_string())
            }
        }
    )*};
}

failed_from!(
    conelab_core::cones::ConeError,
    conelab_core::configurations::ConfigError,
    conelab_core::cremona::CremonaError,
    conelab_core::enumeration::EnumerationError,
    conelab_core::inflation::InflationError,
    conelab_core::swcert::SwError,
    conelab_core::LatticeError
);

/// Result of one command: `ok` is false when a check did not hold.
pub struct Report {
    pub ok: bool,
    pub json: Value,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Output {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Output {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let fmt = commands::Fmt {
        paper_signs: cli.paper_signs,
    };
    let result = match &cli.command {
        Command::Enumerate(a) => commands::enumerate(&fmt, a),
        Command::Squares(a) => commands::squares(a),
        Command::Cremona(c) => commands::cremona(&fmt, c),
        Command::Cone(c) => commands::cone(&fmt, c),
        Command::NefThreshold(a) => commands::nef(&fmt, a),
        Command::Inflate(a) => commands::inflate(&fmt, a),
        Command::Config(c) => commands::config(&fmt, c),
        Command::Sw(c) => commands::sw(&fmt, c),
        Command::VerifyPaper(a) => commands::verify(a),
    };
    match result {
        Ok(r) => {
            let mut stdout = if cli.json {
                serde_json::to_string_pretty(&r.json).expect("json values always serialize")
            } else {
                r.text
            };
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            Output {
                code: if r.ok { EXIT_OK } else { EXIT_CHECK_FAILED },
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Output {
            code: e.code(),
            stdout: String::new(),
            stderr: format!("conelab: {e}\n"),
        },
    }
}
