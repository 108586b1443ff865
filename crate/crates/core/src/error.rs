use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("axiom failure: {0}")]
    Axiom(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("invalid construction: {0}")]
    Construction(String),
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
