use thiserror::Error;

/// Errors produced by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("arity {0} exceeds the supported maximum")]
    ArityTooLarge(usize),

    #[error("{what}: requested arity {requested} exceeds the enumeration cap {cap}")]
    CapabilityExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("minor map refers to target argument {index}, but the target arity is {target_arity}")]
    InvalidMinorMap { index: usize, target_arity: usize },

    #[error("coordinate map is not a permutation of 0..{0}")]
    NotAPermutation(usize),

    #[error("invalid truth table literal {literal:?}: {reason}")]
    ParseTable { literal: String, reason: String },

    #[error("invalid relation text (line {line}): {reason}")]
    ParseRelation { line: usize, reason: String },

    #[error("invalid bit string {0:?}")]
    ParseBits(String),

    #[error("dataset error at row {row}, column {column}: {reason}")]
    ParseDataset {
        row: usize,
        column: usize,
        reason: String,
    },

    #[error("unknown relation {0:?}")]
    UnknownRelation(String),

    #[error("tuple length mismatch: {0}")]
    LengthMismatch(String),

    #[error("majority vote tied ({zeros} votes for 0, {ones} votes for 1)")]
    MajorityTie { zeros: u64, ones: u64 },

    #[error("solution set has {count} elements, more than the cap {cap}")]
    TooManySolutions { count: u128, cap: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
