use alloc::string::String;

/// Errors raised by the construction and verification routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A configured cap (block size, bit length, scan budget) was exceeded.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    /// The interval search ran out of budget. Names the constraint that failed last.
    #[error("search budget exhausted at k={k}: last failing constraint was {constraint}")]
    SearchBudgetExhausted { k: u64, constraint: String },
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("empty prefix: the sequence has no elements below {0}")]
    EmptyPrefix(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("gauge not admissible: {0}")]
    NotAdmissible(String),
}

pub type Result<T> = core::result::Result<T, Error>;
