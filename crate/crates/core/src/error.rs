use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum DunklError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The profile has not decayed at the truncation radius.
    #[error("truncation warning: boundary magnitude {boundary:.3e} exceeds tolerance {tolerance:.3e} (relative to max {max:.3e})")]
    Truncation { boundary: f64, tolerance: f64, max: f64 },

    /// The requested spectral radius is beyond what the grid resolves.
    #[error("resolution error: requested frequency {requested:.4} exceeds spectral cap {cap:.4}")]
    Resolution { requested: f64, cap: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("degenerate ratio: rhs = 0 while lhs = {lhs:.3e}")]
    Degenerate { lhs: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    /// A child failure tagged with where it happened in a sweep.
    #[error("{theorem}/{corpus}/{cell}: {source}")]
    Sweep {
        theorem: String,
        corpus: String,
        cell: String,
        #[source]
        source: Box<DunklError>,
    },

    /// Several sweep cells failed; the first few are listed.
    #[error("{} sweep cell(s) failed; first: {}", .0.len(), .0.first().map(|e| e.to_string()).unwrap_or_default())]
    Aggregate(Vec<DunklError>),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, DunklError>;

pub(crate) fn invalid(msg: impl Into<String>) -> DunklError {
    DunklError::InvalidParameter(msg.into())
}
