use thiserror::Error;

/// Errors raised by the algebra kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands live in incompatible spaces (ring, variable count, truncation).
    #[error("structural mismatch: {0}")]
    Structural(String),

    /// The operation is not defined for the given input (non-unit inverse,
    /// positive characteristic, unsupported root system, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Some generator of the target lattice has infinite order modulo the
    /// source lattice.
    #[error("rational spans differ in degree {degree}: {detail}; enlarge the generator pool")]
    SpanMismatch { degree: u32, detail: String },

    /// Malformed textual input (ring specs, type labels, pool documents).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

pub(crate) fn parse(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}
