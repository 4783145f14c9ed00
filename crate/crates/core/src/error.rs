use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the estimation pipeline.
#[derive(Debug, Error)]
pub enum GasError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("estimation failed at x = {x}: {reason}")]
    Estimation { x: f64, reason: String },

    #[error("interval around x = {x} holds {found} design points, need at least {needed}")]
    ThinWindow { x: f64, found: usize, needed: usize },

    #[error("curvature functional is zero; widen the interval or cap the bandwidth")]
    FlatCurvature,

    #[error("pilot network is identically zero on the design")]
    DegeneratePilot,

    #[error("estimated fourth innovation moment {m4eps} is not above 1")]
    InconsistentPilot { m4eps: f64 },

    #[error("pilot network did not converge for any candidate size (best rss = {rss})")]
    PilotNotConverged { rss: f64, network: Box<crate::pilot::PilotNetwork<f64>> },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no symmetric test pair is supported by the data")]
    NoTestPairs,

    #[error("likelihood fit failed: {0}")]
    Fit(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: u64, msg: String },

    #[error("alignment error: {0}")]
    Alignment(String),

    #[error("experiment failed: {0}")]
    Experiment(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = GasError> = std::result::Result<T, E>;

impl GasError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        GasError::Io { path: path.into(), source }
    }
}
