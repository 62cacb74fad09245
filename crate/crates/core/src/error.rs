use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A caller broke an operation's precondition (shape mismatch, dependent basis, ...).
    #[error("contract violation: {0}")]
    Contract(String),
    /// The input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
