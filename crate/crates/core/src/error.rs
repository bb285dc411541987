use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid layout: {0}")]
    Layout(String),
    #[error("no logical qubit: {0}")]
    NoLogical(String),
    #[error("detectable error chain: anti-commutes with generator {0}")]
    DetectableChain(usize),
    #[error("path error: {0}")]
    Path(String),
    #[error("distance violation: required {required}, found {found}")]
    DistanceViolation { required: usize, found: usize },
    #[error("threshold estimate failed: {0}")]
    NoCrossing(String),
    #[error("too many nodes for exhaustive matching: {0}")]
    TooLarge(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
