use thiserror::Error;

pub type Result<T> = std::result::Result<T, GrandNetError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GrandNetError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("argument out of domain: {0}")]
    OutOfDomain(String),
    #[error("net variant `{0}` cannot be enumerated")]
    UnsupportedEnumeration(String),
    #[error("unsupported branch: {0}")]
    UnsupportedBranch(String),
}

impl GrandNetError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Self::InvalidInput(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Self::OutOfDomain(msg.into())
    }
}
