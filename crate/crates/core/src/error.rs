use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("duplicate argument label `{0}`")]
    DuplicateArgument(String),

    #[error("attack references undeclared argument `{0}`")]
    UndeclaredArgument(String),

    #[error("unknown argument label `{0}`")]
    UnknownLabel(String),

    #[error("invalid ballot: {0}")]
    InvalidBallot(String),

    #[error("unknown voter id {0}")]
    UnknownVoter(usize),

    #[error("ballot of voter {voter} is not conflict-free")]
    ConflictingBallot { voter: usize },

    #[error("outcome is empty")]
    EmptyOutcome,

    #[error("`{0}` is not a preferred extension")]
    NotPreferred(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("solver timed out after {0:.1}s")]
    Timeout(f64),

    #[error("not representable: no outcome 1-represents every voter")]
    NotRepresentable,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        Error::Syntax { line, message: message.into() }
    }

    pub(crate) fn param(message: impl Into<String>) -> Self {
        Error::InvalidParameter(message.into())
    }
}
