use std::io;

use thiserror::Error;

/// Errors raised while loading inputs or building overlap graphs.
#[derive(Debug, Error)]
pub enum HogError {
    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("malformed input at line {line}: {reason}")]
    Format { line: usize, reason: String },

    #[error("FASTA record `{header}` has an empty sequence")]
    EmptyFastaRecord { header: String },

    #[error("pattern #{index} is empty")]
    EmptyPattern { index: usize },

    #[error("pattern #{index} duplicates pattern #{first}")]
    DuplicatePattern { index: usize, first: usize },

    #[error("pattern #{index} is a substring of pattern #{container}")]
    ContainedPattern { index: usize, container: usize },

    #[error("no patterns left after validation")]
    EmptySet,

    #[error("input too large for the brute-force oracle: total length {total_length} exceeds guard {guard}")]
    SizeGuard { total_length: usize, guard: usize },

    #[error("stack of pattern #{pattern} has top {found:?} but node {expected} is being closed")]
    PopMismatch {
        pattern: usize,
        expected: usize,
        found: Option<usize>,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("cannot parse graph document: {0}")]
    Document(String),
}

/// Coarse classes of [`HogError`], used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Io,
    Validation,
    Invariant,
}

impl HogError {
    pub fn class(&self) -> ErrorClass {
        match self {
            HogError::Io(_) | HogError::Document(_) => ErrorClass::Io,
            HogError::Format { .. }
            | HogError::EmptyFastaRecord { .. }
            | HogError::EmptyPattern { .. }
            | HogError::DuplicatePattern { .. }
            | HogError::ContainedPattern { .. }
            | HogError::EmptySet
            | HogError::SizeGuard { .. } => ErrorClass::Validation,
            HogError::PopMismatch { .. } | HogError::Invariant(_) => ErrorClass::Invariant,
        }
    }
}

pub type Result<T, E = HogError> = std::result::Result<T, E>;
