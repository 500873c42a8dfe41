use thiserror::Error;

/// Errors raised by parameter validation, simulation and estimation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar input is outside its admissible domain.
    #[error("invalid `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// An exponential factor such as `e^{2 gamma t}` overflowed `f64`.
    #[error("range error: {0}")]
    Range(String),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("time {0} is not a point of the path's grid")]
    TimeNotOnGrid(f64),

    #[error("invalid test functional: {0}")]
    UnboundedFunctional(String),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite, got {value}")))
    }
}
