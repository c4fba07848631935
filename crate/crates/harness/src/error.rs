use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] spark_core::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("building configuration {id} failed: {msg}")]
    Build { id: String, msg: String },

    #[error("runner failed: {0}")]
    Runner(String),

    #[error("{benchmark} on {input}: output rejected by oracle ({detail})")]
    OracleMismatch {
        benchmark: String,
        input: String,
        detail: String,
    },

    #[error("no reference configuration: run \"base\" first or include it")]
    MissingBase,

    #[error("{path}:{line}: {msg}")]
    Record {
        path: PathBuf,
        line: usize,
        msg: String,
    },
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }
}
