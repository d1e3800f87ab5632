use thiserror::Error;

/// Errors raised by ring, Witt, Cartier and module operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus `{0}` is not monic")]
    NotMonic(String),
    #[error("modulus `{0}` is reducible over F_{1}")]
    Reducible(String, u32),
    #[error("invalid ring spec: {0}")]
    InvalidSpec(String),
    #[error("operation requires a finite ring")]
    NotFinite,
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("parameter mismatch: {0}")]
    ParamsMismatch(String),
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("budget exceeded: {needed} candidates, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("no section available: {0}")]
    NoSection(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}
