use smu_core::SmuError;
use thiserror::Error;

/// Failure of a subcommand, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable inputs or unwritable outputs. Exit code 2.
    #[error("{0}")]
    Usage(String),
    /// A check ran to completion and did not pass. Exit code 1.
    #[error("{0}")]
    Verification(String),
    /// Training produced a non-finite value. Exit code 3.
    #[error("training diverged at epoch {epoch}: non-finite values in {location}")]
    Divergence { epoch: usize, location: String },
}

impl CliError {
    pub const USAGE: u8 = 2;
    pub const VERIFICATION: u8 = 1;
    pub const DIVERGENCE: u8 = 3;

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => Self::USAGE,
            CliError::Verification(_) => Self::VERIFICATION,
            CliError::Divergence { .. } => Self::DIVERGENCE,
        }
    }
}

impl From<SmuError> for CliError {
    fn from(e: SmuError) -> Self {
        match e {
            SmuError::Divergence { epoch, location } => CliError::Divergence { epoch, location },
            SmuError::State(msg) => CliError::Verification(format!("internal error: {msg}")),
            other => CliError::Usage(other.to_string()),
        }
    }
}
