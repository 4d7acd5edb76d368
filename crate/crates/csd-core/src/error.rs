//! Crate-wide error type for user-facing operations.
//!
//! Arithmetic between values that were built against different truncation
//! contexts is a programming error and panics instead; see `Context`.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a rational: {0}")]
    BadRational(String),

    #[error("lattice vector ({0}, {1}) is outside N+ (coordinates must be >= 0, not both 0)")]
    NotInPositiveLattice(i64, i64),

    #[error("truncation degree must be at least 1")]
    BadCutoff,

    #[error("identity {id}: constraint {constraint} violated (got {got})")]
    ConstraintViolated {
        id: &'static str,
        constraint: String,
        got: String,
    },

    #[error("identity {id} requires {what}")]
    MissingParameter { id: &'static str, what: &'static str },

    #[error("identity {id} is a fixed instance and takes no parameter {what}")]
    UnexpectedParameter { id: &'static str, what: &'static str },

    #[error("unknown identity id: {0}")]
    UnknownIdentity(String),

    #[error("family must have strictly increasing degree in the index (step degree is 0)")]
    FamilyNotIncreasing,

    #[error("family vector leaves N+ at index {0}")]
    FamilyLeavesLattice(i64),

    #[error("group element is malformed: generator images are inconsistent near {0}")]
    MalformedElement(String),

    #[error("initial product is not anti-ordered: factor {0} precedes factor {1} in slope order")]
    NotAntiOrdered(usize, usize),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("script line {line}: {msg}")]
    Script { line: usize, msg: String },

    #[error("step {index} invalid: {reason}")]
    InvalidStep { index: usize, reason: String },

    #[error("step {index} broke value preservation (discrepancy at {point:?}, degree {degree}, coefficient {coefficient})")]
    UnsoundStep {
        index: usize,
        point: (u32, u32),
        degree: u32,
        coefficient: String,
    },
}
