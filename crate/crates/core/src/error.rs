use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("weight vectors differ")]
    WeightMismatch,

    #[error("graphon is not pure: {0}")]
    NotPure(String),

    #[error("graphon is not node-transitive")]
    NotTransitive,

    #[error("threshold {threshold} coincides with eigenvalue {eigenvalue}")]
    EigenvalueCollision { threshold: f64, eigenvalue: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn cap(msg: impl Into<String>) -> Self {
        Error::CapExceeded(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
