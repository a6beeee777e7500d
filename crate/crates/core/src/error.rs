use thiserror::Error;

/// Errors produced by the kernel operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain must have at least one element")]
    EmptyDomain,

    #[error("arity must be at least 1")]
    ZeroArity,

    #[error("index {index} out of range for a space of {count} points")]
    IndexOutOfRange { index: usize, count: u128 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("composition undefined: outer functions take arguments over {expected} elements, inner functions produce values over {found}")]
    CompositionUndefined { expected: usize, found: usize },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("empty family: {0}")]
    EmptyFamily(&'static str),

    #[error("budget exceeded for {what}: needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: String,
        needed: u128,
        budget: u128,
    },

    #[error("constraint {constraint} is not an invariant pair: {reason}")]
    NotInvariantConstraint { constraint: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
