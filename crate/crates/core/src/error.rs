use thiserror::Error;

/// Errors produced by the library.
///
/// The variants fall into three classes that callers (the CLI in particular)
/// map onto exit codes: input problems, unsupported sizes, and internal
/// consistency failures that indicate a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("H contains T, Ex = 0")]
    ZeroProfile,

    #[error("internal consistency error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse { offset, message: message.into() }
    }

    pub(crate) fn validation(message: impl Into<String>) -> Self {
        Error::Validation(message.into())
    }

    pub(crate) fn internal(message: impl Into<String>) -> Self {
        Error::Internal(message.into())
    }

    /// True for errors that signal a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
