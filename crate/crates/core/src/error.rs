use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::subsystem::SubsystemCode;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("repository root `{path}` is missing or unreadable: {reason}")]
    RepoRoot { path: PathBuf, reason: String },

    #[error("invalid extension `{0}`: extensions must begin with `.`")]
    BadExtension(String),

    #[error("{}: row {row}: unknown subsystem code `{code}`", path.display())]
    UnknownCode {
        path: PathBuf,
        row: usize,
        code: String,
    },

    #[error("{}: folder `{folder}` is mapped twice (rows {first} and {second})", path.display())]
    DuplicateFolder {
        path: PathBuf,
        folder: String,
        first: usize,
        second: usize,
    },

    #[error("{}: {message}", path.display())]
    MalformedMapping { path: PathBuf, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown repository `{0}`")]
    UnknownRepo(String),

    #[error("duplicate engine name `{0}`")]
    DuplicateEngine(String),

    #[error("no analysed engines to aggregate")]
    NoEngines,

    #[error("averaged centrality has no entry for {0}, which appears in a coupling pair")]
    MissingCentrality(SubsystemCode),

    #[error("unknown metric `{0}` (expected `in-degree` or `betweenness`)")]
    UnknownMetric(String),

    #[error("{}:{line}: malformed DOT: {message}", path.display())]
    MalformedDot {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("I/O error on `{}`: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 for configuration or input problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Internal(_) | Error::MissingCentrality(_) => 1,
            _ => 2,
        }
    }
}
