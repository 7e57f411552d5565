//! Command-line front end for `cfnet-core`: protocol verification, repeater
//! figures, Monte Carlo estimation and parameter sweeps, emitted as JSON, CSV
//! or aligned text.

pub mod args;
pub mod commands;
pub mod range;
pub mod report;

use std::fmt;

pub use args::{Cli, Command, Format};
pub use report::{Cell, Check, Report, Table};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad arguments or configuration.
    Usage(String),
    /// Simulation failure that valid arguments should never trigger.
    Internal(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn usage(e: impl fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }

    pub fn internal(e: impl fmt::Display) -> Self {
        CliError::Internal(e.to_string())
    }
}

/// Runs the selected command on a pool of `cli.threads` workers.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(CliError::internal)?;
    pool.install(|| match &cli.command {
        Command::Verify(a) => commands::verify::run(a),
        Command::Repeater(a) => commands::repeater::run(a),
        Command::Montecarlo(a) => commands::montecarlo::run(a),
        Command::Sweep(a) => commands::sweep::run(a),
    })
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    }
}

pub fn exit_code(report: &Report) -> u8 {
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}
