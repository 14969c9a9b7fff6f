//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by simulation, DSP and security operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value violated a documented invariant.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// Frequency bands overlap after placement or offset correction.
    #[error("band overlap: {0}")]
    BandOverlap(String),

    /// Sample streams that must be the same length are not.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// A covariance matrix lost positive definiteness.
    #[error("covariance not positive definite{}", detail_suffix(.0))]
    NotPositiveDefinite(String),

    /// Pilot tone not found above the noise floor in the search window.
    #[error("pilot not found within {searched_hz} Hz of {expected_hz} Hz")]
    PilotNotFound { expected_hz: f64, searched_hz: f64 },

    /// Shot/electronic calibration runs were inconsistent.
    #[error("invalid calibration: {0}")]
    InvalidCalibration(String),

    /// Equalizer weights grew without bound.
    #[error("equalizer diverged at sample {sample} (|w| = {norm:.3e})")]
    EqualizerDiverged { sample: usize, norm: f64 },

    /// Polarization estimate too small to normalize.
    #[error("degenerate polarization estimate at sample {sample} (a^2+b^2 = {norm_sq:.3e})")]
    DegenerateEstimate { sample: usize, norm_sq: f64 },

    /// A channel-parameter or covariance estimate left the physical region.
    #[error("invalid estimate: {0}")]
    InvalidEstimate(String),

    /// A singular matrix where an invertible one is required.
    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    /// Estimator failure tagged with the sample index it occurred at.
    #[error("estimator failed at sample {sample}: {source}")]
    AtSample {
        sample: usize,
        #[source]
        source: Box<Error>,
    },

    /// I/O error from file output.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn detail_suffix(detail: &str) -> String {
    if detail.is_empty() {
        String::new()
    } else {
        format!(" ({detail})")
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Wraps an error with the sample index where it was raised.
    pub fn at_sample(self, sample: usize) -> Error {
        Error::AtSample {
            sample,
            source: Box::new(self),
        }
    }
}
