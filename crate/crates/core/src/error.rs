use thiserror::Error;

/// Errors raised by the certificate, solver and experiment layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A documented precondition was not met by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An iterative routine hit its iteration cap.
    #[error("{what} failed to converge (residual {residual:.3e})")]
    Numerical { what: &'static str, residual: f64 },

    #[error("null space is trivial")]
    EmptyNullSpace,

    /// Subset enumeration would exceed the configured guard.
    #[error("enumerating {count} subsets exceeds the limit of {limit}")]
    TooLarge { count: u128, limit: u128 },

    #[error("degenerate graph: {0}")]
    DegenerateGraph(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    /// More experiment trials failed inside a solver than the configured budget allows.
    #[error("{failures} solver failures exceed the budget of {budget}")]
    FailureBudget { failures: usize, budget: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
