use thiserror::Error;

use crate::subset::Subset;

/// Errors shared by every solver in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("arithmetic overflow")]
    Overflow,

    #[error("enumeration needs {needed} free elements but the cap is {cap}")]
    Capacity { needed: usize, cap: usize },

    #[error("iteration budget of {0} steps exhausted")]
    Budget(u64),

    #[error("infeasible: {reason}")]
    Infeasible {
        reason: String,
        certificate: Certificate,
    },

    #[error("complement of an intersecting function is only crossing-class")]
    ClassDowngrade,

    #[error("vector is not decreasingly minimal: {0}")]
    NotDecMin(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Witness attached to an infeasibility verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// A subset of the ground set (or node set) violating a defining inequality.
    Set(Subset),
    /// Same as `Set`, for node sets that may exceed 64 elements.
    Nodes(Vec<usize>),
    /// A bridge `(edge index)` blocking strong orientability.
    Bridge(usize),
    /// Free-form explanation when no set witness exists.
    Note(String),
}

impl Error {
    pub fn infeasible_set(reason: impl Into<String>, set: Subset) -> Self {
        Error::Infeasible {
            reason: reason.into(),
            certificate: Certificate::Set(set),
        }
    }

    pub fn infeasible_nodes(reason: impl Into<String>, nodes: Vec<usize>) -> Self {
        Error::Infeasible {
            reason: reason.into(),
            certificate: Certificate::Nodes(nodes),
        }
    }

    pub fn infeasible_note(reason: impl Into<String>) -> Self {
        let reason = reason.into();
        Error::Infeasible {
            certificate: Certificate::Note(reason.clone()),
            reason,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
