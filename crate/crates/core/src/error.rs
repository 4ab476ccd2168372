use thiserror::Error;

/// Errors raised by the multi-segment toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A value violates a structural constraint (e.g. a segment with `e < b`).
    #[error("constraint violation: {0}")]
    Constraint(String),

    /// An operation was called outside its domain (e.g. an empty block).
    #[error("domain error: {0}")]
    Domain(String),

    /// A supplied step, index family or trace does not match its multi-segment.
    #[error("validation error: {0}")]
    Validation(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Enumeration would exceed the configured bound.
    #[error("enumeration bound exceeded: {points} support points in one translation class, bound is {bound}")]
    Resource { bound: usize, points: usize },

    /// Text input could not be parsed.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
