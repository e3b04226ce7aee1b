use thiserror::Error;

use crate::model::Branch;

/// Errors produced by strategy construction, evaluation and the bound checkers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("strategy has no segments")]
    EmptyStrategy,

    #[error("index {index} out of range for a strategy of {len} segments")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("target at distance {distance} on branch {branch} is beyond the horizon of every candidate strategy")]
    HorizonTooShort { distance: f64, branch: Branch },

    #[error("no feasible point: {0}")]
    Infeasible(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
