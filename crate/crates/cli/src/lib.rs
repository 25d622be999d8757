//! Front-end plumbing for the `bbloc` binary: the model-file format, the command reports,
//! the verification suite and figure export.

pub mod report;
pub mod sample;
pub mod schema;
pub mod svg;
pub mod verify;

use bbloc_core::models::ModelError;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Seed used for sampling unless `BBLOC_SEED` overrides it.
pub const DEFAULT_SEED: u64 = bbloc_core::localization::DEFAULT_SEED;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, String),
    #[error("{0}: {1}")]
    Parse(String, String),
    #[error("{0}")]
    Input(String),
    #[error("invalid model: {0}")]
    Model(#[from] ModelError),
    #[error("{0}")]
    Compute(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// The seed from `BBLOC_SEED`, or the default.
pub fn seed_from_env() -> Result<u64, CliError> {
    match std::env::var("BBLOC_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("BBLOC_SEED={s:?} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}
