use thiserror::Error;

/// Errors raised while opening streams, ingesting updates or configuring sketches.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex count must be at least 1")]
    EmptyVertexSet,
    #[error("vertex {id} out of range for a graph with {n} vertices")]
    VertexOutOfRange { id: u64, n: usize },
    #[error("update delta must be +1 or -1, got {0}")]
    InvalidDelta(i64),
    #[error("deletions are not allowed in an insertion-only stream")]
    DeletionInInsertionStream,
    #[error("update orientation does not match the session mode")]
    OrientationMismatch,
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("walk enumeration exceeds the guard of {guard} walks")]
    EnumerationGuard { guard: usize },
    #[error("capacity bound violated for t={t}, epsilon={epsilon}: C={c}")]
    CapacityBound { t: u64, epsilon: f64, c: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
