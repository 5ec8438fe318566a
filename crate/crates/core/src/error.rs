use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input failed validation; `what` names the offending field or index.
    #[error("invalid {what}: {reason}")]
    Validation { what: String, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A value is outside the domain where the formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A jammer strategy violates the average-power budget.
    #[error("infeasible strategy: {0}")]
    Infeasible(String),

    /// Exponentials in the capacity inverse overflowed.
    #[error("numeric overflow: {0}")]
    Overflow(String),

    /// An internal guarantee failed (e.g. the LP of a valid game came back infeasible).
    #[error("contract violation: {0}")]
    ContractViolation(String),
}

impl Error {
    pub(crate) fn invalid(what: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            what: what.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
