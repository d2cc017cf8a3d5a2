use thiserror::Error;

/// Errors raised by the library. Every variant corresponds to a violated
/// precondition; evaluation itself is total once inputs are accepted.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} must be a positive integer")]
    NonPositive { what: &'static str },

    #[error("{what} must not be empty")]
    Empty { what: &'static str },

    #[error("arity mismatch in {context}: expected {expected}, found {found}")]
    Arity {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{0} is not flagged multiplicative")]
    NotMultiplicative(String),

    #[error("{0} is not flagged completely multiplicative")]
    NotCompletelyMultiplicative(String),

    #[error("exponents {0:?} do not form a divisibility chain")]
    ChainViolated(Vec<u32>),

    #[error("function is not even modulo {modulus:?}: differs at {at:?}")]
    NotEven { modulus: Vec<u64>, at: Vec<u64> },

    #[error("set not factor-closed: {missing} divides {of} but is missing")]
    NotFactorClosed { missing: u64, of: u64 },

    #[error("duplicate element {0}")]
    Duplicate(u64),

    #[error("resource ceiling exceeded: {what} needs {needed} > {limit}")]
    ResourceLimit {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
