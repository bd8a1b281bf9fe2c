use thiserror::Error;

/// Errors surfaced by construction and validation paths.
///
/// Mathematical cross-check failures (two formulas for the same invariant
/// disagreeing) get their own variant so callers can map them to a distinct
/// exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("group order {order} exceeds cap {cap}")]
    OrderCap { order: usize, cap: usize },

    #[error("not a subgroup of the parent group: {0}")]
    ForeignSubgroup(String),

    #[error("action matrices violate group relations: {0}")]
    ActionRelation(String),

    #[error("internal invariant violation: {0}")]
    InvariantViolation(String),

    #[error("stabilization audit failed: {0}")]
    Stabilization(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
