use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error(
        "quadrature did not converge: error estimate {estimate:.3e} exceeds tolerance {tol:.3e}"
    )]
    NonConvergence { estimate: f64, tol: f64 },

    #[error("eigen-solver failure: {0}")]
    SolverFailure(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("root not bracketed on [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },

    #[error("grid too coarse: step {step} exceeds {max}")]
    GridTooCoarse { step: f64, max: f64 },

    #[error("signal has zero energy")]
    ZeroSignal,

    #[error("truncation risk: {0}")]
    TruncationRisk(String),

    #[error("degenerate spectrum: all probe eigenvalues below {threshold:.3e}")]
    DegenerateSpectrum { threshold: f64 },

    #[error("value {value} outside admissible range {range}")]
    OutOfRange { value: f64, range: &'static str },

    #[error("ring fit failed: residual {residual:.3e} above threshold {threshold:.3e}")]
    FitFailure { residual: f64, threshold: f64 },

    #[error("black box is not linear: relative defect {defect:.3e}")]
    Nonlinear { defect: f64 },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
