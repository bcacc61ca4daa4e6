use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flag, missing input or invalid parameter; exit status 2.
    #[error("{0}")]
    Usage(String),

    /// Failure inside an analysis; exit status 1.
    #[error(transparent)]
    Analysis(#[from] slanglex::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Analysis(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Maps a library validation failure to a usage error.
pub fn invalid<T>(r: slanglex::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::Usage(e.to_string()))
}
