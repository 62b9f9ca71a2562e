use thiserror::Error;

/// Errors produced while constructing instances or running computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("measures are defined on different spaces")]
    SpaceMismatch,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("max-flow residual {residual:e} exceeds the consistency tolerance")]
    FlowInconsistency { residual: f64 },

    #[error("partition cell {cell} has diameter {diameter} (must be < {bound})")]
    CellTooWide { cell: usize, diameter: f64, bound: f64 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("path {index} violates the net hypothesis: {reason}")]
    HypothesisViolated { index: usize, reason: String },

    #[error("lattice would enumerate {count} points (limit 10^7); use a pitch of at least {suggested_pitch}")]
    LatticeTooLarge { count: f64, suggested_pitch: f64 },

    #[error("Jung bounds violated: diam {diameter}, radius {radius}, witness {witness:?}")]
    JungViolation {
        diameter: f64,
        radius: f64,
        witness: Vec<Vec<f64>>,
    },

    #[error("certificate check failed: {0}")]
    Certificate(String),

    #[error("empty input: {0}")]
    Empty(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
