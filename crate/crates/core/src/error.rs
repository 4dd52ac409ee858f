use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("enumeration would produce {count} items, above the limit of {limit}")]
    ResourceLimit { count: u128, limit: u128 },

    #[error("program is infeasible")]
    Infeasible,

    #[error("feasible region is unbounded")]
    Unbounded,

    #[error("invalid bracket: {0}")]
    InvalidBracket(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
