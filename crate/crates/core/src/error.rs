use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("total degree {0} exceeds the supported maximum")]
    DegreeOverflow(u32),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("undecided: reduction cap of {cap} reached")]
    Undecided { cap: usize },
    #[error("singular point: {0}")]
    Singular(String),
    #[error("not in domain: {0}")]
    Domain(String),
    #[error("no solution: {0}")]
    NoSolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
