use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A record failed validation while loading. `line` is 1-based.
    #[error("line {line}: field `{field}`: {message}")]
    Schema {
        line: usize,
        field: String,
        message: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("unknown ARPAbet symbol `{0}`")]
    UnknownSymbol(String),

    #[error("`{0}` has no alphabetic characters to convert")]
    NotConvertible(String),

    #[error("`{0}` is not in the embedding vocabulary")]
    OutOfVocabulary(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("loss became non-finite at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },

    /// A quantity is mathematically undefined for the given input
    /// (zero vector, zero variance, pooled proportion of 0 or 1, ...).
    #[error("undefined: {0}")]
    Undefined(String),

    #[error("malformed container: {0}")]
    Container(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn schema(line: usize, field: &str, message: impl Into<String>) -> Self {
        Error::Schema {
            line,
            field: field.to_string(),
            message: message.into(),
        }
    }
}
