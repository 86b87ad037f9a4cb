use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The document is not well-formed.
    #[error("{file}: parse error: {msg}")]
    Parse { file: String, msg: String },

    /// The document parsed but violates a scene or walk invariant. `path`
    /// is a JSON-style location such as `sources[2].r_off`.
    #[error("{path}: {msg}")]
    Validation { path: String, msg: String },

    #[error("unknown anchor id \"{0}\"")]
    UnknownAnchor(String),

    #[error("no detections to fuse")]
    NoDetections,

    #[error("{file}: {msg}")]
    Clip { file: PathBuf, msg: String },

    #[error("event log line {line}: {msg}")]
    Log { line: usize, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn validation(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad input content rather than the filesystem.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io { .. })
    }
}
