use thiserror::Error;

/// Errors raised by the library.
///
/// Numerical failures are reported, never hidden: an `Integrity` error means a
/// computed quantity failed a certification threshold, not that the input was bad.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("precision error: {0}")]
    Precision(String),

    #[error("resource error: {0}")]
    Resource(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
pub(crate) use domain;
