//! Library side of the `ouh` binary: simulate killed and radial OU processes and check the h-transform
//! identities between them.

use std::ffi::OsString;

use clap::{Parser, Subcommand};

mod commands;
mod config;

#[derive(Debug, Parser)]
#[command(name = "ouh", version, about = "Killed OU, radial OU and the h-transform between them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample paths and write them as CSV or JSON.
    Simulate(commands::SimulateArgs),
    /// Run every identity check and write report.json and report.csv.
    Verify(commands::VerifyArgs),
    /// Tabulate both closed-form densities and their identity residual.
    Density(commands::DensityArgs),
    /// Monte Carlo and closed-form curve of E_Q[e^{-gamma t} / R_t].
    LocalMartingale(commands::LocalMartingaleArgs),
}

#[derive(Debug)]
pub(crate) enum Failure {
    Io(String),
    Config(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Io(_) => 1,
            Self::Config(_) => 2,
            Self::Verification(_) => 3,
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code: 0 success, 1 I/O, 2 configuration, 3 verification.
pub fn run<I, T>(args: I) -> u8
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
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate(args),
        Command::Verify(args) => commands::verify(args),
        Command::Density(args) => commands::density(args),
        Command::LocalMartingale(args) => commands::local_martingale(args),
    };
    match result {
        Ok(()) => 0,
        Err(failure) => {
            let (kind, msg) = match &failure {
                Failure::Io(m) => ("i/o error", m),
                Failure::Config(m) => ("configuration error", m),
                Failure::Verification(m) => ("verification failed", m),
            };
            eprintln!("ouh: {kind}: {msg}");
            failure.code()
        }
    }
}
