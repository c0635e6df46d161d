use std::process::ExitCode;

use thiserror::Error;

/// Failures that stop a command. A certificate that fails is not an error:
/// commands report it and exit with [`EXIT_FAILED`].
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] otlab_core::Error),
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

impl CliError {
    /// Errors raised while checking a solution count as certificate
    /// failures; everything else is bad input.
    pub fn exit_code(&self) -> ExitCode {
        use otlab_core::Error as E;
        let code = match self {
            CliError::Core(
                E::SolverStalled { .. } | E::Infeasible { .. } | E::Glueing { .. } | E::PotentialMismatch { .. },
            ) => EXIT_FAILED,
            _ => EXIT_INPUT,
        };
        ExitCode::from(code)
    }
}
