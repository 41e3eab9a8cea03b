use thiserror::Error;

/// Errors produced by the poset, cube and search routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relations do not form a partial order: {0}")]
    Cycle(String),
    #[error("element index {index} out of range for size {size}")]
    Index { index: usize, size: usize },
    #[error("size limit exceeded: {0}")]
    Size(String),
    #[error("unknown catalog poset `{0}`")]
    UnknownName(String),
    #[error("catalog poset `{0}` needs a parameter")]
    MissingParameter(String),
    #[error("value out of range: {0}")]
    Range(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
