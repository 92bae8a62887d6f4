use thiserror::Error;

/// Library-wide error type.
///
/// `Domain` marks arguments outside an operator's mathematical domain,
/// `Hypothesis` marks inputs that violate the assumptions a check needs
/// (zero mean, compact support, decay), and the CLI maps both to its
/// usage exit code.
#[derive(Error, Debug)]
pub enum FraclabError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, FraclabError>;

impl FraclabError {
    pub fn domain(msg: impl Into<String>) -> Self {
        FraclabError::Domain(msg.into())
    }

    pub fn hypothesis(msg: impl Into<String>) -> Self {
        FraclabError::Hypothesis(msg.into())
    }
}
