use thiserror::Error;

use crate::families::CrossingFamily;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Three input points are collinear.
    #[error("point set is not in general position: {0}")]
    Degenerate(String),

    #[error("duplicate x-coordinate survives lexicographic ordering: {0}")]
    DuplicateX(String),

    /// The instance is too small for the requested sizes; the theoretical
    /// `n >= C*k*m` regime is not met.
    #[error("insufficient points at stage `{stage}`: need {needed}, have {have}")]
    InsufficientPoints {
        stage: String,
        needed: usize,
        have: usize,
    },

    #[error("same-type reduction exhausted after {rounds} rounds: {reason}")]
    ReductionExhausted { rounds: usize, reason: String },

    #[error("sets are not separated")]
    NotSeparated,

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("lines {0} and {1} are parallel")]
    ParallelLines(usize, usize),

    #[error("rational snapping at denominator {0} is too coarse: {1}")]
    SnapTooCoarse(u64, String),

    /// The search budget ran out; `best` is the best family found so far and
    /// is not known to be optimal.
    #[error("oracle budget exhausted after {nodes} nodes (best so far: {} segments)", best.len())]
    OracleTimeout { nodes: u64, best: CrossingFamily },

    /// An internal consistency check failed. Never expected.
    #[error("invariant violated: {0}")]
    Invariant(String),
}
