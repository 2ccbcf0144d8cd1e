use thiserror::Error;

/// Errors raised by the engine.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Usage(String),
    #[error("resource budget exceeded: {what} has size {size}, limit is {limit}")]
    Budget {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("series constant term is not a unit")]
    NonUnitConstant,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

/// Returns a budget error when `size` exceeds `limit`.
pub(crate) fn check_budget(what: &'static str, size: u128, limit: u128) -> Result<()> {
    if size > limit {
        Err(Error::Budget { what, size, limit })
    } else {
        Ok(())
    }
}
