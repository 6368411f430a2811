//! The `smu` command line.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage error, 3 training diverged.

pub mod args;
pub mod commands;
mod config;
mod error;

use std::ffi::OsString;
use std::process::ExitCode;

pub use args::{Cli, Command};
pub use error::CliError;

/// Parses `argv` (program name first), runs the subcommand and reports errors on stderr.
pub fn main_with_args<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let cli = match config::parse(argv.into_iter().map(Into::into).collect()) {
        Ok(cli) => cli,
        Err(config::ParseError::Clap(e)) => {
            let _ = e.print();
            return ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(CliError::USAGE));
        }
        Err(config::ParseError::Config(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(CliError::USAGE);
        }
    };
    match commands::run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
