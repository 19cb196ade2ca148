use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("incompatible series: {0}")]
    Incompatible(String),
    #[error("division by a non-unit")]
    NonUnit,
    #[error("logarithm of a series whose constant term is not 1")]
    LogOfNonUnit,
    #[error("exponential of a series with nonzero constant term")]
    ExpOfNonNilpotent,
    #[error("nonintegrable term: {0}")]
    NonIntegrable(String),
    #[error("singular Jacobian at the base point")]
    SingularJacobian,
    #[error("no solution at order 0")]
    NoSolution,
    #[error("implicit solve did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("insufficient local expansion order: {0}")]
    InsufficientOrder(String),
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unstable (g, n) = ({0}, {1})")]
    Unstable(u32, usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
