//! Crate-wide error type. Variants are grouped by how the CLI maps them to
//! exit codes: input problems exit 2, resolution/search-capacity problems exit 3.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed spec text. `offset` is a byte position into the input.
    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A word or parameter does not fit inside the generated depth.
    #[error("resolution exceeded: {0}")]
    ResolutionExceeded(String),

    /// An operation consumed all available resolution (e.g. shifting a
    /// length-1 trace).
    #[error("resolution exhausted: {0}")]
    ResolutionExhausted(String),

    /// Substitution iteration failed to stabilize within its caps.
    #[error("non-convergence: {0}")]
    NonConvergence(String),

    /// Exhaustive subset search was skipped because the candidate pool is
    /// too large; distinct from "absent".
    #[error("search space cap exceeded: pool of {pool} words exceeds cap {cap}")]
    SearchSpaceCapExceeded { pool: u128, cap: usize },

    /// The cylinder's symbol content does not occur in the scanned orbit prefix.
    #[error("match failure: {0}")]
    MatchFailure(String),

    /// No recurrence bound within the scan window.
    #[error("recurrence failure: {0}")]
    RecurrenceFailure(String),

    #[error("prefix too short: {0}")]
    PrefixTooShort(String),

    #[error("count overflow at length {0}")]
    CountOverflow(usize),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(offset: usize, msg: impl Into<String>) -> Self {
        Error::Parse { offset, msg: msg.into() }
    }

    /// CLI exit-code contract: 2 input error, 3 resolution/search error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::InvalidInput(_) | Error::Io(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
