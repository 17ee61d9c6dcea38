use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument {x} outside the domain {domain}")]
    OutOfDomain { x: f64, domain: &'static str },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("quadrature did not converge after {nodes} nodes (last relative change {change:e})")]
    NonConvergence { nodes: usize, change: f64 },

    #[error("series does not decay at truncation {index} (last term log-magnitude {log_term})")]
    Diverging { index: usize, log_term: f64 },

    #[error("truncation cap {cap} too small: {required} terms required")]
    TruncationCap { cap: usize, required: usize },

    #[error("search exhausted: {0}")]
    Exhausted(String),

    #[error("inconsistent input: {0}")]
    Inconsistent(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
