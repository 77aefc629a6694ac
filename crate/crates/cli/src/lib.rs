//! Commands behind the `h1lab` binary. Every command returns a
//! [`RunReport`](report::RunReport) whose JSON form is deterministic for
//! identical inputs.

pub mod commands;
pub mod report;
pub mod reproduce;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or out-of-range input; exit code 2.
    #[error("invalid input: {0}")]
    Input(String),
    /// The computation itself failed; exit code 1.
    #[error("computation failed: {0}")]
    Compute(#[from] h1lab::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}
