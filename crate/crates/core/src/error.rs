use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A configured cap (term count, tower height, bit budget, search size) was hit.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    /// The caller violated an operation's precondition.
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not a valid ordinal code: {0}")]
    InvalidCode(String),
    #[error("parse error at offset {pos}: expected {expected}, found {found}")]
    Parse {
        pos: usize,
        expected: String,
        found: String,
    },
    #[error("invalid coloring: {0}")]
    Coloring(String),
    /// An instance contradicted a proven lemma. Always an implementation bug.
    #[error("falsification event: {0}")]
    Falsification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn limit(what: impl Into<String>) -> Self {
        Error::ResourceLimit(what.into())
    }

    pub(crate) fn precondition(what: impl Into<String>) -> Self {
        Error::Precondition(what.into())
    }
}
