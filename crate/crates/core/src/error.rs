use std::fmt;

use thiserror::Error;

use crate::finbase::ElemId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("function graph is not total on its domain")]
    NotTotal,
    #[error("{arg} is sent to {image}, which is outside the codomain")]
    OutOfCodomain { arg: ElemId, image: ElemId },
    #[error("domain/codomain mismatch")]
    BoundaryMismatch,
    #[error("operands live over different base categories")]
    BaseMismatch,
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("presentation is not closed within paths of length {0}")]
    BoundExceeded(usize),
    #[error("ill-formed relation: {0}")]
    IllFormedRelation(String),
    #[error("legs do not form a cocone over the diagram")]
    NotACocone,
    #[error("stale move: {0}")]
    StaleMove(String),
    #[error("replay diverged at step {step}: expected digest {expected}, got {actual}")]
    ReplayMismatch { step: usize, expected: String, actual: String },
    #[error("validation failed: {}", join(.0))]
    Invalid(Vec<Violation>),
}

fn join(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// A broken law, naming the ids involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub law: &'static str,
    pub ids: Vec<ElemId>,
    pub detail: String,
}

impl Violation {
    pub fn new(law: &'static str, ids: Vec<ElemId>, detail: impl Into<String>) -> Self {
        Violation { law, ids, detail: detail.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.law)?;
        if !self.ids.is_empty() {
            let ids: Vec<String> = self.ids.iter().map(|i| i.to_string()).collect();
            write!(f, " [{}]", ids.join(", "))?;
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// Turns a violation list into a result.
pub fn check(violations: Vec<Violation>) -> Result<()> {
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::Invalid(violations))
    }
}
