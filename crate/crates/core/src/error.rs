use thiserror::Error;

/// Errors raised by evaluation, symbolic derivation and verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter c = {0} is a non-positive integer")]
    PoleAtC(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no convergence after {iterations} iterations in {context}")]
    NoConvergence { context: &'static str, iterations: usize },
    #[error("derivative of order {order} unavailable at x = {at}")]
    DerivativeUnavailable { order: usize, at: f64 },
    #[error("unsupported derivative: {0}")]
    UnsupportedDerivative(String),
    #[error("resolvent term b_{0} is not supported (j <= 2)")]
    UnsupportedJ(usize),
    #[error("xi-monomial of degree {0} cannot be integrated over the sphere")]
    UnsupportedXiDegree(usize),
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("homogeneity mismatch: {0}")]
    HomogeneityMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
