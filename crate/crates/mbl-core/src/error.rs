use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("index {index} out of range 0..{len}")]
    OutOfRange { index: usize, len: usize },

    #[error("degenerate spectrum: gap {gap:e} below {tol:e}")]
    Degenerate { gap: f64, tol: f64 },

    #[error("invalid correlation matrix: eigenvalue {0} outside [0, 1]")]
    InvalidCorrelation(f64),

    #[error("size mismatch: {0}")]
    Size(String),

    #[error("eigensolver failure ({routine}, info = {info}, n = {n})")]
    Eigensolver { routine: &'static str, info: i32, n: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("fit not available: {0}")]
    FitNotAvailable(String),

    #[error("system of {sites} sites exceeds the cap of {cap}")]
    CapExceeded { sites: usize, cap: usize },

    #[error("realization {index}: {source}")]
    Realization { index: usize, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}
