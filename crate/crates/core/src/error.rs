use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dense dimension {dim} exceeds the cap of {cap} states")]
    CapExceeded { dim: usize, cap: usize },
    #[error("not proven: {0}")]
    NotProven(String),
    #[error("unresolved spectral collision: {0}")]
    Unresolved(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("obstructed: {0}")]
    Obstructed(String),
    #[error("verification failed: {0}")]
    Verification(String),
}
