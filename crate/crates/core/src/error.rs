//! Error type shared by every module of the crate.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("schema error at line {line}: {message}")]
    Schema { line: usize, message: String },

    #[error("unknown value '{value}' for {field}")]
    Vocabulary { field: String, value: String },

    #[error("edge endpoint '{0}' is not a declared user")]
    DanglingEndpoint(String),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("only one class present ({0} records); both classes are required")]
    SingleClass(usize),

    #[error("column '{0}' has no non-missing values in the training partition")]
    AllMissing(String),

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("model file format version {found} is not supported (expected {expected})")]
    IncompatibleVersion { found: u64, expected: u64 },

    #[error("model file failed integrity check: {0}")]
    Integrity(String),

    #[error("loglinear fit did not converge after {iterations} iterations (gradient norm {gradient_norm:e})")]
    NotConverged {
        iterations: usize,
        gradient_norm: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
