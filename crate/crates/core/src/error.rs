use thiserror::Error;

use crate::matrix::Violation;

/// Errors produced by the library.
///
/// Row and column indices carried by variants are 0-based; `Display` output
/// renders them 1-based so messages line up with the usual matrix notation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("entry ({}, {}) = {value} is not 0 or 1", .row + 1, .col + 1)]
    NotBinary { row: usize, col: usize, value: f64 },

    #[error("matrix is not epsilon-bi-stochastic")]
    NotEpsBistochastic,

    #[error("invalid similarity matrix: {}", join_violations(.0))]
    InvalidInput(Vec<Violation>),

    #[error("non-finite scaling value at iteration {iteration}")]
    NonFinite { iteration: usize },

    #[error("completed epsilon-row entry at column {} is {value}, below the clamp threshold", .col + 1)]
    NegativeCompletion { col: usize, value: f64 },

    #[error("constant c = {c} must exceed every similarity entry (max = {max})")]
    ConstantTooSmall { c: f64, max: f64 },

    #[error("cost matrix corner must be 0, found {0}")]
    CornerNonzero(f64),

    #[error("negative cost {value} at ({}, {})", .row + 1, .col + 1)]
    NegativeCost { row: usize, col: usize, value: f64 },

    #[error("instance {n}x{m} exceeds the supported bound {limit}")]
    TooLarge { n: usize, m: usize, limit: usize },

    #[error("relative error undefined for non-positive exact value {0}")]
    DivisionByZero(f64),

    #[error("exp overflow at ({}, {})", .row + 1, .col + 1)]
    Overflow { row: usize, col: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
