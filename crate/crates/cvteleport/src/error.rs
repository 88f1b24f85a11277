use thiserror::Error;

/// Error taxonomy for the whole crate.
///
/// Numeric routines return `InvalidArgument` for malformed inputs (non-finite,
/// out of domain, wrong dimension), `NotSymplectic` when a matrix fails the
/// symplectic condition it is required to satisfy, `YSingular` when the
/// measured-quadrature block of a Bell interaction cannot be inverted,
/// `UnsupportedState` for states outside the implemented family (e.g. mixed
/// two-mode states in the standard-form reduction), and `InvalidState` for
/// covariance data that violates physicality outright.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not symplectic (max deviation {deviation:.3e}, tolerance {tol:.3e})")]
    NotSymplectic { deviation: f64, tol: f64 },

    #[error("Y block of the Bell interaction is singular (|det Y| = {det:.3e}); gains cannot be normalized")]
    YSingular { det: f64 },

    #[error("unsupported state: {0}")]
    UnsupportedState(String),

    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be finite, got {value}")))
    }
}
