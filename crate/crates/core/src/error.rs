use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Io(#[from] io::Error),

    /// A tagged corpus contained a token without a `surface|TAG` shape.
    #[error("line {line}: malformed token `{token}`: {reason}")]
    MalformedToken {
        line: usize,
        token: String,
        reason: &'static str,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    /// Training produced (or was about to produce) a non-finite parameter.
    #[error("training diverged: {0}")]
    Divergence(String),

    #[error("context window is empty or degenerate")]
    DegenerateContext,

    #[error("`{label}` not found in {space} space")]
    OutOfVocabulary { label: String, space: &'static str },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("cannot load model (line {line}): {message}")]
    Load { line: usize, message: String },

    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn load(line: usize, message: impl Into<String>) -> Self {
        Error::Load {
            line,
            message: message.into(),
        }
    }
}
