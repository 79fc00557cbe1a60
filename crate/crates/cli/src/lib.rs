//! Command-line drivers for the `qcollide` simulator.
//!
//! [`run`] parses an argument vector, executes one subcommand, writes its
//! declared output and returns the process exit code: 0 on success, 2 for
//! argument or validation errors, 3 for numerical contract violations.

mod args;
mod commands;
pub mod format;
pub mod records;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::Parser;

pub use args::{parse_state, parse_triple, Command, RunConfig};
pub use records::{read_channel, ChannelRecord, EndpointRecord, SpecFile, StateFile};

/// Environment variable overriding the dense-backend particle cap.
pub const DENSE_CAP_VAR: &str = "QCOLLIDE_DENSE_CAP";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] qcollide::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use qcollide::Error as E;
        match self {
            CliError::Core(
                E::SingularAt { .. }
                | E::NotUnitary { .. }
                | E::NotHermitianUnitary { .. }
                | E::NonFinite
                | E::Calibration { .. },
            ) => EXIT_NUMERICAL,
            _ => EXIT_INVALID,
        }
    }
}

/// Parse `argv` (program name first) and run the selected subcommand.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match commands::execute(&config.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// A finished command: file body plus the one-line summary.
pub(crate) struct Output {
    pub body: Option<String>,
    pub summary: String,
}

/// Write `body` to `path` (stdout when absent or `-`). The summary goes to
/// stdout, or to stderr when stdout carries the data.
pub(crate) fn emit(out: Output, path: Option<&Path>) -> Result<(), CliError> {
    let to_stdout = path.map_or(true, |p| p.as_os_str() == "-");
    if let Some(body) = &out.body {
        if to_stdout {
            let mut so = std::io::stdout().lock();
            so.write_all(body.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
        } else {
            let p = path.expect("checked above");
            std::fs::write(p, body).map_err(|source| CliError::Io { path: p.display().to_string(), source })?;
        }
    }
    if to_stdout && out.body.is_some() {
        eprintln!("{}", out.summary);
    } else {
        println!("{}", out.summary);
    }
    Ok(())
}
