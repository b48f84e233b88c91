use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("parse error at column {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error(transparent)]
    Library(#[from] cdna_core::Error),

    /// Output was produced but some simulation trials hit the cap.
    #[error("{0} trial(s) truncated at the transmission cap")]
    Truncated(u64),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("internal: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } => 2,
            CliError::Library(cdna_core::Error::UnsupportedRange(_)) => 3,
            CliError::Library(_) => 2,
            CliError::Truncated(_) => 4,
            CliError::Io(_) | CliError::Csv(_) | CliError::Internal(_) => 1,
        }
    }
}
