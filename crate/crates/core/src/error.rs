use std::io;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid corpus: {0}")]
    Validation(String),

    #[error("vocabulary is empty after frequency and stopword filtering")]
    EmptyVocabulary,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value in {update} update{context}")]
    Numerical { update: &'static str, context: String },

    #[error("corpus has no link tokens, so DocTopic statistics are undefined; fit a text-only model instead")]
    NoLinkTokens,

    #[error("unsupported {what} format: {detail}")]
    Format { what: &'static str, detail: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn numerical(update: &'static str) -> Self {
        Error::Numerical {
            update,
            context: String::new(),
        }
    }

    /// Attaches "(outer iteration N, document M)" style context to numerical errors.
    pub(crate) fn with_context(self, ctx: impl FnOnce() -> String) -> Self {
        match self {
            Error::Numerical { update, context } => Error::Numerical {
                update,
                context: format!("{context} ({})", ctx()),
            },
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
