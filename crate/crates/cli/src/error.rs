use std::path::PathBuf;

use thiserror::Error;

/// Failures of the command-line front end.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or inconsistent configuration.
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] impactbandit::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 for configuration problems, 1 for everything that went wrong while
    /// running.
    pub fn exit_code(&self) -> i32 {
        use impactbandit::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(
                E::Config(_)
                | E::InvalidDiscretization(_)
                | E::EmptyActionSpace { .. }
                | E::InfeasibleInstance(_)
                | E::InvalidModel(_)
                | E::InvalidHorizon(_)
                | E::DimensionMismatch { .. },
            ) => 2,
            CliError::Core(_) | CliError::Io { .. } => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
