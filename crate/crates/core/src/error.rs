use thiserror::Error;

/// Failure modes shared by every numerical module.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// An input violates a documented precondition (normalization, unitarity, bounds).
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The discretization cannot represent the requested state to the required accuracy.
    #[error("accuracy error: {0}")]
    Accuracy(String),
    /// A perturbative or asymptotic expansion left its range of validity.
    #[error("validity error: {0}")]
    Validity(String),
    /// Gain exceeds loss: the birth-death chain has no steady state.
    #[error("divergence: {0}")]
    Divergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
