use std::path::PathBuf;

use thiserror::Error;

/// Failure of a CLI command, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration or flags (exit code 2).
    #[error("configuration error: {0}")]
    Config(String),

    #[error("configuration error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Failure while running (exit code 1).
    #[error("runtime error: {0}")]
    Runtime(#[from] bayes_ucb::Error),

    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Parse { .. } => 2,
            CliError::Runtime(_) | CliError::Io { .. } => 1,
        }
    }

    pub(crate) fn config(e: impl std::fmt::Display) -> Self {
        CliError::Config(e.to_string())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
