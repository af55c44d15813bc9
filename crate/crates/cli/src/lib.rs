//! Library half of the `avgop` binary. [`run`] parses arguments, runs one
//! command and returns the process exit code, writing reports to `out` and
//! diagnostics to `err`. Exit codes: 0 success, 1 violation found, 2 usage or
//! input error, 3 numerical non-convergence.

pub mod args;
mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

pub use args::{Cli, Command};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] avgop::Error),
    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(avgop::Error::NoConvergence { .. }) => EXIT_NO_CONVERGENCE,
            _ => EXIT_USAGE,
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match commands::dispatch(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Report wrapper shared by every command. Keys are emitted in sorted order,
/// so output is byte-stable across runs.
pub(crate) struct Envelope {
    command: &'static str,
    config: Value,
    timestamp: bool,
}

impl Envelope {
    pub(crate) fn new(command: &'static str, config: Value, timestamp: bool) -> Self {
        Self {
            command,
            config,
            timestamp,
        }
    }

    /// One JSON object on one line. `key` is `verdict` or `records`.
    pub(crate) fn write(
        &self,
        out: &mut dyn Write,
        key: &str,
        body: &impl Serialize,
    ) -> Result<(), CliError> {
        let mut doc = json!({
            "command": self.command,
            "config": self.config,
            "version": avgop::VERSION,
        });
        doc[key] = serde_json::to_value(body).map_err(|e| avgop::Error::Parse(e.to_string()))?;
        if self.timestamp {
            let secs = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            doc["timestamp"] = json!(secs);
        }
        writeln!(out, "{doc}")?;
        Ok(())
    }
}
