use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Solve(#[from] hadamard_core::Error),
}

impl CliError {
    /// 2 for anything wrong with the inputs or the filesystem, 1 when the
    /// computation itself fails.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Solve(_) => 1,
            _ => 2,
        }
    }
}

/// Errors raised while building a problem are configuration errors.
pub fn config(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}
