use thiserror::Error;

/// Errors raised by the toolkit's constructors, oracles and solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground set must contain at least one item")]
    EmptyGroundSet,

    #[error("{what}: m = {m} exceeds the supported cap of {cap}")]
    UnsupportedSize {
        what: &'static str,
        m: usize,
        cap: usize,
    },

    #[error("ground set mismatch: expected m = {expected}, found m = {found}")]
    GroundSetMismatch { expected: usize, found: usize },

    #[error("item {item} is outside the ground set 1..={m}")]
    ItemOutOfRange { item: usize, m: usize },

    #[error("{what}: expected {expected} entries, found {found}")]
    Arity {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("table value at the empty set must be 0, found {0}")]
    NotNormalized(String),

    #[error("invalid valuation: {0}")]
    InvalidValuation(String),

    #[error("cardinality k = {k} outside 0..={m}")]
    CardinalityOutOfRange { k: usize, m: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
