use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sample must contain at least {min} values, got {got}")]
    SampleTooSmall { min: usize, got: usize },

    #[error("sample value at index {index} is not finite ({value})")]
    NonFiniteValue { index: usize, value: f64 },

    #[error("{0}")]
    Domain(String),

    #[error("exact enumeration needs {required} interleavings, above the cap of {cap}; use the Monte-Carlo backend")]
    EnumerationCapExceeded { required: u128, cap: u64 },

    #[error("optimizer started from an infeasible point {0:?}")]
    InfeasibleStart(Vec<f64>),

    #[error("{family} fit did not converge after {evaluations} evaluations (best {best:?}, log-likelihood {log_likelihood})")]
    FitFailed {
        family: String,
        best: Vec<f64>,
        log_likelihood: f64,
        evaluations: usize,
    },

    #[error("moment matching left residual {residual:e} above tolerance {tolerance:e} (best {best:?})")]
    MomentMatchFailed {
        best: Vec<f64>,
        residual: f64,
        tolerance: f64,
    },

    #[error("effect-size calibration left residual {residual:e} in d units (shift {shift})")]
    CalibrationFailed { shift: f64, residual: f64 },

    /// Wraps a failure with the part of the pipeline it came from.
    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error once all context layers are peeled off.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }
}
