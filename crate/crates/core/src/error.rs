use thiserror::Error;

/// Errors raised by instance construction, the moment engine and the verifiers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("demand t = {t} exceeds the number of edges ({edges})")]
    DemandTooLarge { t: u64, edges: usize },

    #[error("instance too large for {what}: {size} > {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("probability p = {0} is outside [0, 1]")]
    ProbabilityOutOfRange(String),

    #[error("variable sets are not disjoint")]
    NotDisjoint,

    #[error("variable {0} does not belong to the graph")]
    UnknownVariable(String),

    #[error("invalid pivot {index}: diagonal entry {value} is not positive")]
    InvalidPivot { index: usize, value: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
