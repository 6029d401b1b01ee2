use thiserror::Error;

use crate::stabilizer::ValidityReason;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size mismatch: expected {expected} qubits, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("qubit index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid stabilizer group: {0}")]
    Invalid(ValidityReason),

    #[error("invalid Clifford element: {0}")]
    InvalidClifford(String),

    #[error("arity error: {0}")]
    Arity(String),

    #[error("capacity exceeded: {what} is {value}, cap is {cap}")]
    Capacity {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("internal formula mismatch: {0}")]
    FormulaMismatch(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
