use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum HqwError {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("capacity exceeded: {what} is {got}, limit {limit}")]
    Capacity {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("structure error: {0}")]
    Structure(String),

    #[error("operator has zero Frobenius norm; normalization undefined")]
    UndefinedNormalization,

    #[error("generators are (nearly) parallel; sectional plane is degenerate")]
    DegeneratePlane,

    #[error("matrix logarithm failed: {0}")]
    Domain(String),

    #[error("sensitivity vector norm {0:e} below threshold; axis undefined")]
    DegenerateAxis(f64),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, HqwError>;
