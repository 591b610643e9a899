//! Front end for `fracdyn`: configuration, command dispatch and artifact
//! emission. All numerics live in `fracdyn_core`.

pub mod config;
mod run;

use fracdyn_core::FracError;
use thiserror::Error;

pub use config::{parse_config, RunConfig};
pub use run::{run, Command};

#[derive(Debug, Error)]
pub enum CliError {
    /// Contract or validation failure; exit code 1.
    #[error("{0}")]
    Validation(String),
    /// The numerics did not converge; exit code 2.
    #[error("{0}")]
    NonConvergence(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NonConvergence(_) => 2,
            CliError::Validation(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<FracError> for CliError {
    fn from(e: FracError) -> Self {
        if e.is_non_convergence() {
            CliError::NonConvergence(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}
