//! Command-line front end for the `xyep` library.
//!
//! Every subcommand writes one document: JSON by default, or CSV/SVG with
//! `--format`. Each document carries the full run configuration, and floats
//! are written with 17 significant digits so that repeated runs are
//! byte-identical and files parse back to the exact values.

pub mod args;
pub mod commands;
pub mod dto;
pub mod output;
pub mod render;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use thiserror::Error;

use crate::args::Cli;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] xyep::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    /// 1 for usage and validation errors, 2 for numerical failures,
    /// capacity guards and I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_validation() => 1,
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }
}

/// Parses `args`, runs the command and writes its output. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let text = commands::dispatch(&cli.command, &cli.global)?;
    match &cli.global.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Output(e.to_string()))
        }
    }
}
