use thiserror::Error;

/// Errors raised by the analytic and simulation routines.
///
/// Variants split into two families: input validation (the caller handed us
/// something outside the model) and numeric failures (the model was fine but
/// a solver or formula broke down). [`Error::is_validation`] tells them apart.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid {field}: {reason}")]
    Validation { field: &'static str, reason: String },

    #[error("assumption {which} violated: {reason}")]
    Assumption { which: u8, reason: String },

    #[error("matrix is not Hermitian: |m[{row}][{col}] - conj(m[{col}][{row}])| = {deviation:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("matrix is not positive definite: pivot {pivot} is {value:e}")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error(
        "eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})"
    )]
    EigenNoConvergence { sweeps: usize, residual: f64 },

    #[error("fixed point did not converge after {iterations} iterations (residual {residual:e})")]
    FixedPointNoConvergence { iterations: usize, residual: f64 },

    #[error("unstable configuration: t^2 * gamma * gamma_tilde = {value} >= 1")]
    Unstable { value: f64 },

    #[error("third asymptotic moment is not positive (nu = {nu:e})")]
    NonPositiveThirdMoment { nu: f64 },

    #[error("moment fit needs positive moments: {reason}")]
    Fit { reason: String },

    #[error("argument {arg} outside the MGF domain (boundary s* = {boundary})")]
    MgfDomain { arg: f64, boundary: f64 },

    #[error("{0}")]
    Domain(String),

    #[error("not enough samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },
}

impl Error {
    pub(crate) fn validation(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            field,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad inputs rather than numeric breakdown.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Validation { .. }
                | Error::Assumption { .. }
                | Error::NotHermitian { .. }
                | Error::Domain(_)
                | Error::TooFewSamples { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
