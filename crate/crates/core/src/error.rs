use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A degree or size exceeds a configured cap.
    #[error("capacity exceeded: {what} = {value} > {max}")]
    Capacity {
        what: &'static str,
        value: usize,
        max: usize,
    },

    /// Invalid model parameters (z, z', vartheta).
    #[error("invalid parameters: {0}")]
    Parameter(String),

    /// An internal exact identity failed to hold.
    #[error("consistency failure: {0}")]
    Consistency(String),

    /// A floating-point series lost too much precision to be trusted.
    #[error("numerically unstable: {0}")]
    Unstable(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
