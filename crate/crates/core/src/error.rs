use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate state: covariance determinant {det:e} is not invertible")]
    DegenerateState { det: f64 },

    #[error("truncation error: {what} defect {defect:e} exceeds {tol:e}")]
    Truncation {
        what: &'static str,
        defect: f64,
        tol: f64,
    },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),
}

impl Error {
    /// True for failures that come from the numerics (truncation, convergence,
    /// unphysical intermediate states) rather than from bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DegenerateState { .. }
                | Error::Truncation { .. }
                | Error::InvalidState(_)
                | Error::NonConvergence(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
