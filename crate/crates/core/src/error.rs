use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised while loading inputs or running the pipeline.
///
/// Everything except [`Error::Internal`] describes bad input data.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}:{line}: {message}")]
    Parse {
        context: String,
        line: u64,
        message: String,
    },

    #[error("{context}: duplicate sample for ({entity}, {concept}, t={t}) on lines {first_line} and {second_line}")]
    DuplicateSample {
        context: String,
        entity: String,
        concept: String,
        t: i64,
        first_line: u64,
        second_line: u64,
    },

    #[error("invalid knowledge base: {0}")]
    KnowledgeBase(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("entity {0:?} has no reference time")]
    MissingReferenceTime(String),

    #[error("entities with intervals but no class label: {}", .0.join(", "))]
    UnlabeledEntities(Vec<String>),

    #[error("mining configurations differ: {0}")]
    ConfigMismatch(String),

    #[error("bad TIRP {text:?}: {message}")]
    Tirp { text: String, message: String },

    #[error("planted TIRP {tirp} cannot be realized: {reason}")]
    Unrealizable { tirp: String, reason: String },

    #[error("input exceeds brute-force limits: {0}")]
    OracleLimit(String),

    #[error("{0}")]
    Statistics(String),

    #[error("malformed JSON in {context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(context: impl Into<String>, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            context: context.into(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json {
            context: context.into(),
            source,
        }
    }

    /// True for failures caused by the input rather than by this crate.
    pub fn is_data_error(&self) -> bool {
        !matches!(self, Error::Internal(_))
    }
}
