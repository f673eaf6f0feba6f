use std::io;

use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("column count mismatch: {left} vs {right}")]
    ColumnCountMismatch { left: usize, right: usize },
    #[error("column {0} is zero")]
    ZeroColumn(usize),
    #[error("at least two columns are required, got {0}")]
    TooFewColumns(usize),
    #[error("subset enumeration needs {needed} subsets, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("singular value decomposition did not converge")]
    ConvergenceFailure,
    #[error("matrix is numerically rank deficient")]
    RankDeficient,
    #[error("argument outside of the function domain: {0}")]
    Domain(String),
    #[error("infeasible configuration: {0}")]
    Infeasible(String),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("shape mismatch: expected {expected:?}, got {actual:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("non-finite entry at position {0}")]
    NonFinite(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
