use thiserror::Error;

pub type Result<T, E = ZetaError> = std::result::Result<T, E>;

/// Failure kinds shared by every module of the crate.
///
/// The split matters to callers: input and domain errors mean the request
/// itself was wrong, numeric and resource errors mean a valid request could
/// not be carried out.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZetaError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("resource limit: {0}")]
    Resource(String),
}

impl ZetaError {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        ZetaError::Input(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        ZetaError::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        ZetaError::Numeric(msg.into())
    }

    /// True for errors caused by the caller's request rather than by
    /// computation limits.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            ZetaError::Input(_) | ZetaError::Domain(_) | ZetaError::Unsupported(_)
        )
    }
}
