use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("{path}: {location}: {message}")]
    Parse {
        path: PathBuf,
        /// "line N" for text formats, "offset N" for binary ones.
        location: String,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Solver(#[from] lqgame::Error),
}

impl HarnessError {
    /// 2 for usage errors, 3 for parse errors, 1 otherwise. Exit code 4 (a run
    /// that finished but missed its guarantee) is not an error; see [`crate::Outcome`].
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Solver(lqgame::Error::InvalidArgument(_)) => 2,
            Self::Parse { .. } => 3,
            Self::Io { .. } | Self::Solver(_) => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, location: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Parse {
            path: path.into(),
            location: location.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
