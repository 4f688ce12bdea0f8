use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Shapes or caches that do not belong together.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("training diverged at batch {batch}: {reason}")]
    TrainingDivergence { batch: usize, reason: String },

    /// A fairness batch without positive examples in one sensitive group.
    #[error("degenerate batch: {0}")]
    DegenerateBatch(String),

    #[error("config error at line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    #[error("invalid config field `{field}`: {message}")]
    ConfigField { field: String, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    /// True for errors caused by the user's input rather than by a run failing.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::ConfigParse { .. } | Error::ConfigField { .. } | Error::Schema(_)
        )
    }
}
