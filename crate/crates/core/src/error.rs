use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid Frobenius coordinates: {0}")]
    InvalidFrobenius(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("size mismatch: expected n = {expected}, got n = {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("n = {n} exceeds the configured cap of {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("tuple budget exceeded: n^r = {cost} is larger than the budget {budget}")]
    BudgetExceeded { cost: u128, budget: u128 },

    #[error("regime violated: {0}")]
    RegimeViolated(String),

    #[error("formula is singular: {0}")]
    Singular(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
