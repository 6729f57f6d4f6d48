use thiserror::Error;

use crate::exponents::GroupContext;

/// Errors raised by the engine. Verdicts such as "not full" or "cap exceeded"
/// are values, not errors; these are malformed inputs and violated
/// preconditions.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("group context mismatch: {left} vs {right}")]
    ContextMismatch {
        left: GroupContext,
        right: GroupContext,
    },

    #[error("invalid group context: {0}")]
    InvalidContext(String),

    #[error("cannot embed {from} into {into}")]
    Embedding { from: GroupContext, into: GroupContext },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("not a basis of Z^n: {0}")]
    NotABasis(String),

    #[error("undefined m-value at vertex pair ({i}, {j})")]
    UndefinedMValue { i: usize, j: usize },

    #[error("{0}")]
    Precondition(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
