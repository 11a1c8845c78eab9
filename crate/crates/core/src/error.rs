use thiserror::Error;

/// Errors raised by the physics routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of the formula.
    #[error("domain error: {0}")]
    Domain(String),
    /// A documented precondition of an operation was violated.
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Fails with a domain error unless `x` is finite and strictly positive.
pub(crate) fn require_positive<T: num_traits::Float>(x: T, what: &str) -> Result<()> {
    if x.is_finite() && x > T::zero() {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must be finite and positive")))
    }
}
