use thiserror::Error;

/// Errors reported by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("empty request: {0}")]
    Empty(&'static str),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error(
        "quadrature did not converge: estimated error {achieved:e} exceeds tolerance {requested:e} after {panels} panels"
    )]
    QuadratureNonConvergence {
        achieved: f64,
        requested: f64,
        panels: usize,
    },

    #[error("codewords are identical; the pairwise error ratio is undefined")]
    IdenticalCodewords,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of a numeric procedure (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::QuadratureNonConvergence { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_positive<T: crate::Real>(name: &'static str, value: T) -> Result<T> {
    if value.is_finite() && value > T::zero() {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("must be finite and > 0, got {value}")))
    }
}

pub(crate) fn ensure_nonnegative<T: crate::Real>(name: &'static str, value: T) -> Result<T> {
    if value.is_finite() && value >= T::zero() {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("must be finite and >= 0, got {value}")))
    }
}
