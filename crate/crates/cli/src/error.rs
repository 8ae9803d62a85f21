use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{file}:{line}:{column}: {message}")]
    Parse {
        file: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown catalog entry {0:?} (see `toric-k catalog`)")]
    UnknownCatalogEntry(String),
    #[error("{0}")]
    Invalid(#[from] toric_k::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// `2` for usage errors, `1` for everything the input itself gets wrong.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}
