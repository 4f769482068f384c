use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// Degree, valuations and reciprocal are undefined on the zero polynomial.
    #[error("{0} is undefined for the zero polynomial")]
    ZeroPolynomial(&'static str),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("0^0 is undefined")]
    ZeroToTheZero,

    #[error("polynomial {0} is not odd (it has a root in {{0, 1}})")]
    NotOdd(String),

    #[error("out of domain: {0}")]
    Domain(String),

    /// The iteration did not reach 1 within the configured number of steps.
    #[error("step budget of {budget} exhausted while tracing {input}")]
    StepBudget { budget: u64, input: String },

    /// A proven structural property failed. Never fires on a correct build.
    #[error("theorem violation while tracing {input}: {detail}")]
    TheoremViolation { input: String, detail: String },

    /// Embedded reference data failed its integrity check.
    #[error("fixture error: {0}")]
    Fixture(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
