use thiserror::Error;

use crate::ordinal::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("point {point} lies outside the space [0, {gamma}]")]
    OutOfSpace { point: String, gamma: String },

    #[error("empty point set")]
    EmptySet,

    #[error("no cofinal sequence: {0} is not a limit ordinal")]
    NoCofinalSequence(String),

    #[error("malformed sequence: {0}")]
    MalformedSequence(String),

    #[error("step functions live on different spaces ({0} vs {1})")]
    SpaceMismatch(String, String),

    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),

    #[error("size limit exceeded: {size} > {limit}")]
    SizeLimit { size: usize, limit: usize },

    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("no witness: {0}")]
    NoWitness(String),

    #[error("degenerate gradient: {0}")]
    DegenerateGradient(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
