use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("instance has {n} vertices, exhaustive cut enumeration is limited to {limit}")]
    InstanceTooLarge { n: usize, limit: usize },

    #[error("{what}: {count} candidates exceeds the exact-search limit of {limit}")]
    TooManyEdges {
        what: &'static str,
        count: usize,
        limit: usize,
    },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("linear program is infeasible")]
    LpInfeasible,

    #[error("linear program is unbounded")]
    LpUnbounded,

    #[error("cutting-plane loop exceeded {0} rows")]
    IterationLimitExceeded(usize),

    #[error("separation oracle returned a row that is not strictly violated: {0}")]
    OracleInconsistent(String),

    #[error("iterative rounding stuck: no variable reached 1/2 (max value {max_value})")]
    RoundingStuck { max_value: String },

    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    #[error("rounding restarted more than {0} times")]
    RestartLimitExceeded(usize),

    #[error("two-cover subproblem infeasible: {0}")]
    TwoCoverInfeasible(String),
}

impl Error {
    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolated(msg.into())
    }
}
