use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] aeqs_core::Error),

    #[error("relation file line {line}, column {column}: {message}")]
    MalformedRelationFile { line: usize, column: usize, message: String },

    #[error("relation file line {line}: expected {expected} bits, got {got}")]
    LengthMismatch { line: usize, expected: usize, got: usize },

    #[error("relation `eq` needs an even input length, got n = {0}")]
    OddLengthForEq(usize),

    #[error("builtin relation `{0}` needs --n")]
    MissingLength(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown suite `{name}`; valid suites: {valid}")]
    UnknownSuite { name: String, valid: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
