use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("infeasible threshold: y = {y} outside [0, {total}]")]
    InfeasibleThreshold { y: f64, total: f64 },

    #[error("not concave: {0}")]
    NotConcave(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("curve domain [0, {curve_end}] does not match weight total {weight_total}")]
    DomainMismatch { curve_end: f64, weight_total: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("capacity exceeded: n = {n} > {max}")]
    Capacity { n: usize, max: usize },

    #[error("non-finite gradient at iteration {iteration}")]
    Numerical { iteration: usize },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
