use thiserror::Error;

use crate::expr::ExprError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] genkahler::Error),
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        CliError::Parse(e.to_string())
    }
}

/// Coarse outcome class of an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input: exit code 2.
    Input,
    /// A reduction cap or degree bound was hit: exit code 3.
    Undecided,
    /// The computation failed: exit code 1.
    Failed,
}

impl CliError {
    pub fn code(&self) -> &'static str {
        use genkahler::Error::*;
        match self {
            CliError::Parse(_) => "parse",
            CliError::Usage(_) => "usage",
            CliError::Core(e) => match e {
                DegreeOverflow(_) => "degree_overflow",
                DimensionMismatch { .. } => "dimension_mismatch",
                DivisionByZero => "division_by_zero",
                Undecided { .. } => "undecided",
                Singular(_) => "singular",
                Domain(_) => "domain",
                NoSolution(_) => "no_solution",
            },
        }
    }

    pub fn class(&self) -> ErrorClass {
        use genkahler::Error::*;
        match self {
            CliError::Parse(_) | CliError::Usage(_) => ErrorClass::Input,
            CliError::Core(DegreeOverflow(_) | Undecided { .. } | NoSolution(_)) => ErrorClass::Undecided,
            CliError::Core(_) => ErrorClass::Failed,
        }
    }
}
