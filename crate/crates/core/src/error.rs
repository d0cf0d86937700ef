use thiserror::Error;

/// Errors raised by the lattice and spectral computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input (degree mismatch, bad cycle string, non-prime p).
    #[error("input error: {0}")]
    Input(String),
    /// A configured size cap was exceeded.
    #[error("size error: {what} exceeded the cap of {cap}")]
    Size { what: &'static str, cap: usize },
    /// Arguments outside the domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative numeric routine failed.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Two exact routes that must agree did not.
    #[error("consistency error: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
