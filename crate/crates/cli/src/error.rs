use std::path::PathBuf;

use thiserror::Error;
use wht_core::Error as CoreError;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}:{line}: cannot parse `{text}` as a number")]
    MalformedInput {
        path: PathBuf,
        line: usize,
        text: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::MalformedInput { .. } => EXIT_USAGE,
            CliError::Io { .. } | CliError::Csv(_) | CliError::Json(_) => EXIT_IO,
            CliError::Core(e) => match e {
                CoreError::Divergence { .. }
                | CoreError::Eval(_)
                | CoreError::NonFinite { .. }
                | CoreError::NonUnitNorm { .. } => EXIT_NUMERIC,
                _ => EXIT_USAGE,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
