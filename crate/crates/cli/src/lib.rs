//! Command-line front end: runs a sweep described by a [`RunConfig`] and
//! writes it as CSV with a `# key=value` header.
//!
//! Exit codes: 0 success, 2 bad arguments, 3 numerical failure (including
//! failed `validate` checks), 4 I/O.

pub mod commands;
pub mod config;
pub mod svg;
pub mod table;

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::Parser;
use thiserror::Error;

pub use config::{Cli, Command, RunConfig};
pub use table::{parse_csv, parse_metadata, write_csv, Table};

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "RQIT_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] rqit_core::Error),
    #[error("{0} validation check(s) failed")]
    ChecksFailed(usize),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Parse(_) => 2,
            Self::Core(e) if e.is_numeric() => 3,
            Self::Core(_) => 2,
            Self::ChecksFailed(_) => 3,
            Self::Io(_) => 4,
            Self::Csv(e) if e.is_io_error() => 4,
            Self::Csv(_) => 2,
        }
    }
}

/// Reads the `# key=value` preamble of a CSV produced by this tool back into
/// the configuration that produced it.
pub fn parse_run_header(text: &str) -> Result<RunConfig, CliError> {
    let (pairs, _) = parse_metadata(text)?;
    RunConfig::from_metadata(&pairs)
}

fn configure_threads() -> Result<(), CliError> {
    let Some(raw) = std::env::var_os(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .to_str()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // A second call in the same process (tests) finds the pool already built.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Runs the configured command and writes its outputs.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    configure_threads()?;
    let table = commands::execute(config)?;
    match &config.output {
        Some(path) => write_csv(&table, fs::File::create(path)?)?,
        None => {
            let stdout = std::io::stdout();
            write_csv(&table, stdout.lock())?;
        }
    }
    if let Some(path) = &config.svg {
        let title = format!("{} at r = {}", config.command, config.r);
        fs::write(path, svg::render(&table, commands::plot_columns(config.command), &title))?;
    }
    if config.command == Command::Validate {
        let failed = commands::failed_checks(&table);
        if failed > 0 {
            return Err(CliError::ChecksFailed(failed));
        }
    }
    Ok(())
}

/// Parses a full argument list (program name first) into a validated config.
pub fn parse_args<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    RunConfig::from_cli(cli)
}

/// Parses arguments, runs, reports errors on stderr and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|config| run(&config));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "rqit: {e}");
            e.exit_code()
        }
    }
}
