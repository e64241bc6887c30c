use thiserror::Error;

use crate::chow::Threefold;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("classes live on different threefolds ({left} vs {right})")]
    ModelMismatch { left: Threefold, right: Threefold },

    #[error("slope of a rank-0 sheaf is undefined")]
    ZeroRank,

    #[error("parse error at position {position}: expected {expected}, found {found}")]
    Parse {
        position: usize,
        expected: String,
        found: String,
    },

    #[error("the exceptional divisor `E` only exists on F1 (position {position})")]
    ExceptionalOnF0 { position: usize },

    #[error("negative exponent at position {position}")]
    NegativeExponent { position: usize },

    #[error("invalid monad specification: {}", violations.join("; "))]
    InvalidSpec { violations: Vec<String> },

    #[error("charge ({alpha}, {beta}) is outside the admissible range of the {variant} recipe: {reason}")]
    Inadmissible {
        variant: String,
        alpha: i32,
        beta: i32,
        reason: String,
    },

    #[error("the {variant} recipe lives on {expected}, not {found}")]
    WrongThreefold {
        variant: String,
        expected: Threefold,
        found: Threefold,
    },

    #[error("Riemann-Roch returned the non-integral value {value}")]
    NonIntegral { value: String },

    #[error("a stability check needs at least one summand")]
    EmptySummands,

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
