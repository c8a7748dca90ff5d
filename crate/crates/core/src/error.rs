use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a concept name was refused by [`ConceptDatabase::add_concept`](crate::ConceptDatabase::add_concept).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    /// Nothing alphanumeric survived cleanup.
    Empty,
    /// More tokens than the configured maximum.
    TooLong { words: usize, max: usize },
}

impl std::fmt::Display for RejectReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RejectReason::Empty => write!(f, "name is empty after cleanup"),
            RejectReason::TooLong { words, max } => {
                write!(f, "name has {words} words, more than the limit of {max}")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vector dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("word frequency is undefined for a vocabulary with zero total count")]
    EmptyVocabulary,

    #[error("no vocabulary words carry vectors")]
    NoVectoredWords,

    #[error("unknown concept `{0}`")]
    UnknownConcept(String),

    #[error("concept `{0}` has no trained embedding")]
    Untrained(String),

    #[error("name `{name}` rejected: {reason}")]
    NameRejected { name: String, reason: RejectReason },

    #[error("invalid CDB container: {0}")]
    Format(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("prediction references unknown document `{0}`")]
    UnknownDocument(String),

    #[error("corpus read failed after {documents} documents: {source}")]
    CorpusRead {
        documents: usize,
        #[source]
        source: io::Error,
    },
}

impl Error {
    /// True for errors caused by the model or the query rather than by files.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::UnknownConcept(_)
                | Error::Untrained(_)
                | Error::NameRejected { .. }
                | Error::Config(_)
                | Error::DimensionMismatch { .. }
                | Error::NoVectoredWords
                | Error::EmptyVocabulary
        )
    }
}
