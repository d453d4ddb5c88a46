use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical kernels and the distribution algebra.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure did not converge or produced a non-finite value.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Two evaluation regimes of the Mittag-Leffler function disagree.
    #[error("evaluation regimes disagree: {first} vs {second}")]
    RegimeDisagreement { first: Complex64, second: Complex64 },

    /// A representation violates one of its structural invariants.
    #[error("invalid model: {0}")]
    Model(String),

    /// The requested functional is almost surely zero.
    #[error("degenerate distribution: {0}")]
    Degenerate(String),

    /// A requested moment is infinite.
    #[error("moment of order {order} does not exist (tail index {tail_index})")]
    MomentDoesNotExist { order: f64, tail_index: f64 },

    /// A series was asked to evaluate outside its region of convergence.
    #[error("out of domain: {0}")]
    OutOfDomain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn numeric<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Numeric(msg.into()))
}

pub(crate) fn model<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Model(msg.into()))
}
