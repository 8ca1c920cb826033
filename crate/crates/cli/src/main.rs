//! `retvol` command-line driver.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 computation error.

mod config;
mod output;
mod pipeline;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

use config::Cli;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or input files.
    Input(String),
    /// An estimator or model step failed on otherwise valid input.
    Compute(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Compute(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Compute(m) => write!(f, "computation error: {m}"),
        }
    }
}

impl From<retvol::Error> for CliError {
    fn from(e: retvol::Error) -> Self {
        CliError::Compute(e.to_string())
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = config::resolve(&cli.command)?;
    let artifacts = pipeline::run(&cfg)?;
    artifacts.write_to(&cfg.out)
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("retvol: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
