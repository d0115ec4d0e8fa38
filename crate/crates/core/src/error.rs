use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}; expected 2, 4 or 8")]
    InvalidModulus(u32),
    #[error("cannot halve a polynomial with an odd coefficient")]
    OddHalf,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not in numerator of {group}: {reason}")]
    Numerator { group: &'static str, reason: String },
    #[error("class group mismatch: {0} vs {1}")]
    GroupMismatch(&'static str, &'static str),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
