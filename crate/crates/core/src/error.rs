use thiserror::Error;

/// Errors produced by the network, noise and optimization routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error in {context}: expected {expected}, got {got}")]
    Dimension {
        context: String,
        expected: String,
        got: String,
    },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("invalid measurement plan: {0}")]
    InvalidPlan(String),

    #[error("refused: {0}")]
    Refused(String),
}

impl Error {
    pub(crate) fn dimension(
        context: impl Into<String>,
        expected: impl ToString,
        got: impl ToString,
    ) -> Self {
        Error::Dimension {
            context: context.into(),
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
