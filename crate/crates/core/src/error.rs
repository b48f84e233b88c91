use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("index {index} out of range 1..={q}")]
    IndexOutOfRange { index: usize, q: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("alphabet mismatch: expected q={expected}, got q={found}")]
    AlphabetMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    /// The request is well formed but outside what the exact routine will
    /// evaluate; the message names the supported alternative.
    #[error("unsupported range: {0}")]
    UnsupportedRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
