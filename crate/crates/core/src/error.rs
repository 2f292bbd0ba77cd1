use thiserror::Error;

/// Errors raised by the numerical routines and the experiment harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Weight exponents outside the admissible set for the given `p`.
    #[error("weight exponents violate J_p: {0}")]
    Admissibility(String),

    /// A point or parameter outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A precondition of an operation or theorem does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("derivative order {requested} exceeds the certified maximum {max} for `{name}`")]
    OrderOutOfRange { name: String, requested: usize, max: usize },

    #[error("`{name}` is singular at x = {x}")]
    Singular { name: String, x: f64 },

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    /// Internal numerical failure (eigenvalue solver, singular system, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The exchange loop of the minimax solver did not settle.
    #[error("minimax exchange stalled after {iterations} iterations (level {level:e}, max error {max_error:e})")]
    ExchangeStall { iterations: usize, level: f64, max_error: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
