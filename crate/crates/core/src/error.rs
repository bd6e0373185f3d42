use thiserror::Error;

use crate::identity::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid sequence spec: {0}")]
    InvalidSpec(String),

    #[error("invalid index range {lo}..{hi}: lower bound exceeds upper bound")]
    InvalidRange { lo: i64, hi: i64 },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown sequence `{0}`")]
    UnknownSequence(String),

    #[error("value {value} is not within 1e-6 of an integer (residual {residual})")]
    RoundingResidual { value: String, residual: String },

    #[error(transparent)]
    Parse(#[from] ParseError),
}
