use thiserror::Error;

/// Errors raised by the counting and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("resource limit exceeded: {what} needs {needed}, limit is {limit}")]
    ResourceLimit {
        what: &'static str,
        needed: u128,
        limit: u128,
    },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("quadrature did not converge: {0}")]
    Convergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn overflow(what: &'static str) -> Error {
    Error::Overflow(what)
}
