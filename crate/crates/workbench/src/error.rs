use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

use crate::doc::Kind;

/// A malformed document, located by line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub origin: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}: {}", self.origin, self.line, self.column, self.message)
    }
}

#[derive(Debug, Error)]
pub enum WorkbenchError {
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error at {0}")]
    Parse(ParseError),
    #[error("unsupported format version: {0}")]
    Version(String),
    #[error("expected a {expected} document, found {found}")]
    KindMismatch { expected: Kind, found: Kind },
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("unknown session `{0}`")]
    UnknownSession(String),
    #[error("stale move: {0}")]
    StaleMove(String),
    #[error("nothing to undo")]
    NothingToUndo,
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error(transparent)]
    Core(kanbench_core::Error),
}

impl WorkbenchError {
    /// Stable name used in reports and HTTP error bodies.
    pub fn kind(&self) -> &'static str {
        match self {
            WorkbenchError::Io { .. } => "IoError",
            WorkbenchError::Parse(_) | WorkbenchError::Version(_) | WorkbenchError::KindMismatch { .. } => "ParseError",
            WorkbenchError::Validation(_) => "ValidationError",
            WorkbenchError::UnknownSession(_) => "UnknownSession",
            WorkbenchError::StaleMove(_) => "StaleMove",
            WorkbenchError::NothingToUndo => "NothingToUndo",
            WorkbenchError::BadRequest(_) => "BadRequest",
            WorkbenchError::Core(_) => "Error",
        }
    }
}

impl From<kanbench_core::Error> for WorkbenchError {
    fn from(e: kanbench_core::Error) -> Self {
        use kanbench_core::Error as E;
        match e {
            E::Invalid(vs) => WorkbenchError::Validation(vs.iter().map(|v| v.to_string()).collect()),
            E::StaleMove(m) => WorkbenchError::StaleMove(m),
            E::UnknownObject(_)
            | E::UnknownMorphism(_)
            | E::NotTotal
            | E::OutOfCodomain { .. }
            | E::BoundaryMismatch
            | E::BaseMismatch
            | E::BoundExceeded(_)
            | E::IllFormedRelation(_) => WorkbenchError::Validation(vec![e.to_string()]),
            other => WorkbenchError::Core(other),
        }
    }
}

pub type Result<T, E = WorkbenchError> = std::result::Result<T, E>;
