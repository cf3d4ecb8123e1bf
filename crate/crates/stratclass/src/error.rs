use thiserror::Error;

/// Errors surfaced by the library.
///
/// The CLI maps `Config`/`Validation` to exit code 2 and `Numeric` to exit
/// code 3; everything else is a plain failure.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the documented domain of an operation.
    #[error("domain violation: {0}")]
    Domain(String),

    /// A model object failed construction-time validation.
    #[error("validation failed: {0}")]
    Validation(String),

    /// A configuration file could not be parsed or described an invalid scenario.
    #[error("invalid config: {0}")]
    Config(String),

    /// An iterative numerical routine failed to converge.
    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
