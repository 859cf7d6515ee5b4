use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or non-finite input data.
    #[error("input error: {0}")]
    Input(String),

    /// A parameter outside its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// The operation is undefined for this argument (zero matrix, singular resolvent, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method failed; `trace` holds the per-iteration diagnostics.
    #[error("numerical error: {message}")]
    Numerical { message: String, trace: Vec<f64> },

    /// A hypothesis of the operation does not hold for the input.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Problem size outside the supported desk-scale range.
    #[error("size error: {0}")]
    Size(String),

    /// A constructed object violates its own invariant.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn numerical(message: impl Into<String>) -> Self {
        Error::Numerical {
            message: message.into(),
            trace: Vec::new(),
        }
    }

    /// True for errors caused by the caller's data rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Input(_)
                | Error::Parameter(_)
                | Error::Precondition(_)
                | Error::Size(_)
                | Error::Unsupported(_)
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
