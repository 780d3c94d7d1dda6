use thiserror::Error;

/// Errors raised by the numerical layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function}: argument outside the supported envelope ({detail})")]
    Domain { function: &'static str, detail: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("grid of {grid} points cannot resolve modes up to {band} (need at least {needed})")]
    BandLimit { grid: usize, band: usize, needed: usize },

    #[error("hypersurface belongs to {surface} but the eigenfunction lives on {model}")]
    ModelMismatch { model: &'static str, surface: &'static str },

    #[error("failed to bracket zero #{k} of J_{n}")]
    ZeroBracket { n: u32, k: u32 },

    #[error("no Bessel zero of order {n} within the admissible slack of the target {target}")]
    NoAdmissibleZero { n: u32, target: f64 },

    #[error("{what} did not converge: {detail}")]
    NoConvergence { what: &'static str, detail: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }

    /// True for failures of an iterative numerical method, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ZeroBracket { .. } | Error::NoConvergence { .. } | Error::NoAdmissibleZero { .. }
        )
    }
}
