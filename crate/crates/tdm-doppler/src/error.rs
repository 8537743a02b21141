//! Error type shared across the crate.
//!
//! Every variant renders to a single line so CLI failures stay
//! machine-parsable.

use std::path::PathBuf;

use crate::config::ValidationReport;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Radar parameters failed validation; the report lists every violation.
    #[error("invalid radar parameters: {0}")]
    InvalidParams(ValidationReport),

    /// A scene target violates its invariants (index into the target list).
    #[error("target {index} invalid: {reason}")]
    InvalidTarget { index: usize, reason: String },

    /// Bin or antenna index outside the valid range.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// Array dimensions disagree with the radar parameters.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Detector configuration rejected (k = 0, CFAR window too large, ...).
    #[error("invalid detector: {0}")]
    InvalidDetector(String),

    /// Estimator precondition violated (too few antennas, |v_det| > v_max, ...).
    #[error("estimator precondition failed: {0}")]
    Estimator(String),

    /// Config file problem: unknown key, duplicate key, bad value, missing key.
    #[error("config error: {0}")]
    Config(String),

    /// Binary cube/map file does not match the expected layout.
    #[error("format error: {0}")]
    Format(String),

    /// I/O failure, annotated with the path involved.
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    /// Pipeline failure wrapped with the stage that produced it.
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
