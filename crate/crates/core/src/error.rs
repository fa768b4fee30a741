use thiserror::Error;

/// Crate-wide error type.
///
/// `Domain` is a rejected input (precondition violation), `SizeGuard` is a
/// refused computation whose estimated cost exceeds the configured ceiling,
/// and `Internal` signals a broken invariant inside the crate itself.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("size guard: {what} refused, estimated cost {estimate}")]
    SizeGuard { what: String, estimate: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn size_guard(what: impl Into<String>, estimate: impl Into<String>) -> Self {
        Error::SizeGuard {
            what: what.into(),
            estimate: estimate.into(),
        }
    }
}
