use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable or invalid inputs. Exit code 2.
    #[error("{0}")]
    Usage(String),

    /// An invariant or engine-agreement check failed. Exit code 1.
    #[error("{0}")]
    Check(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Check(_) | CliError::Io(_) => ExitCode::from(1),
        }
    }
}

impl From<gsearch_core::Error> for CliError {
    fn from(e: gsearch_core::Error) -> Self {
        use gsearch_core::Error as E;
        match e {
            E::InvalidConfig(_)
            | E::IndexOutOfRange { .. }
            | E::LengthMismatch { .. }
            | E::NormViolation { .. }
            | E::InconsistentSummary(_)
            | E::InvalidDistribution(_)
            | E::Malformed(_)
            | E::Io(_)
            | E::VanishingUnmarkedAverage => CliError::Usage(e.to_string()),
            E::ComplexRatio | E::ScalarOnly | E::DegenerateSample { .. } => {
                CliError::Check(e.to_string())
            }
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

pub type CliResult<T> = Result<T, CliError>;
