use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("{op}: domain error: {msg}")]
    Domain { op: &'static str, msg: String },

    /// The argument sits exactly on a pole of the function.
    #[error("{op}: pole at {at}")]
    Pole { op: &'static str, at: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite intermediate: {0}")]
    NonFinite(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    pub(crate) fn pole(op: &'static str, at: impl ToString) -> Self {
        Error::Pole { op, at: at.to_string() }
    }
}
