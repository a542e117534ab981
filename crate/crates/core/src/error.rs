use thiserror::Error;

/// Errors produced by the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A policy whose kink or retained shares make the regime thresholds undefined.
    #[error("degenerate policy: {0}")]
    DegeneratePolicy(String),

    /// An integrand or model quantity evaluated to a non-finite value.
    #[error("numeric domain error: {0}")]
    NumericDomain(String),

    #[error("quadrature did not converge on [{lo}, {hi}]: error estimate {estimate:e}")]
    QuadratureNonConvergence { lo: f64, hi: f64, estimate: f64 },

    #[error("no budget-balancing subsidy: {0}")]
    NoBalance(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),
}

impl Error {
    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NumericDomain(_)
                | Error::QuadratureNonConvergence { .. }
                | Error::NoBalance(_)
                | Error::InvalidModel(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
