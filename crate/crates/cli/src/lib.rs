//! Report assembly, run configuration and the self-test harness behind the
//! `malle` binary.

pub mod commands;
pub mod config;
pub mod report;
pub mod selftest;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const SELFTEST_FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const REFUSED: u8 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] malle_core::Error),

    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(malle_core::Error::EvenOrder(_)) => exit::REFUSED,
            _ => exit::USAGE,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
