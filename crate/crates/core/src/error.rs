use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("theta must be a badly approximable irrational")]
    RationalTheta,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("incompatible radicands {0} and {1}")]
    Radicand(String, String),
    #[error("invalid pair: {0}")]
    InvalidPair(String),
    #[error("vertical line excluded by θ ∈ Bad(i)")]
    VerticalLine,
    #[error("zero line (A, B) = (0, 0)")]
    ZeroLine,
    #[error("identical lines")]
    IdenticalLines,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("empty collection at level {0}")]
    EmptyCollection(usize),
    #[error("falsification: {0}")]
    Falsification(String),
    #[error("hypothesis failure: {0}")]
    Hypothesis(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

pub type Result<T> = std::result::Result<T, Error>;
