use thiserror::Error;
use zfrt_core::CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("index {index} in `{atom}` is outside 1..={n}")]
    Index { index: usize, n: usize, atom: String },
    #[error("unknown target `{0}`")]
    UnknownTarget(String),
    #[error("unknown format `{0}` (expected json or markdown)")]
    UnknownFormat(String),
    #[error("cannot read `{path}`: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write `{path}`: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("invalid report document: {0}")]
    Report(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

pub type Result<T> = std::result::Result<T, CliError>;
