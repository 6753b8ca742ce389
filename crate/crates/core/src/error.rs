use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// Gamma evaluated at a nonpositive integer.
    #[error("pole of the Gamma function at x = {0}")]
    Pole(f64),
    /// A series lost more digits to cancellation than the policy allows.
    #[error("precision loss: {0}")]
    Precision(String),
    /// An iterative or adaptive method did not reach its tolerance.
    #[error("no convergence: {0}")]
    Convergence(String),
    /// Too few usable samples for a fit or statistic.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
