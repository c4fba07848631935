use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by storage conversions, ingestion, generators and kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid matrix structure: {0}")]
    Structure(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("duplicate entry at ({row}, {col}) (1-based)")]
    Duplicate { row: usize, col: usize },

    #[error("unsupported matrix market file: {0}")]
    Unsupported(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("zero or missing diagonal in row {row}")]
    SingularDiagonal { row: usize },

    #[error("matrix is singular to working precision at column {col}")]
    Singular { col: usize },

    #[error("diagonal preconditioner undefined: zero or missing diagonal in row {row}")]
    Preconditioner { row: usize },

    #[error("iteration diverged at step {iteration}")]
    Divergence { iteration: usize },

    #[error("degenerate triangle (element {element})")]
    Geometry { element: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dense oracle refused {n}x{n} matrix (limit {limit})")]
    SizeGuard { n: usize, limit: usize },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
