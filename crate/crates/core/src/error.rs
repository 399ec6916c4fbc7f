use thiserror::Error;

/// Errors raised by the library. The variants line up with the exit codes of
/// the command-line front end: parse failures, unsupported or infeasible
/// requests, and violated mathematical invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Group specification problems: mismatched groups, wrong rank.
    #[error("group specification error: {0}")]
    Spec(String),
    /// An argument outside the operation's domain (empty set, eps <= 0, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Malformed description text.
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    /// Representation kinds that cannot be combined or are not supported.
    #[error("representation kind error: {0}")]
    Kind(String),
    /// A query outside the window of an oracle representation.
    #[error("horizon error: {0}")]
    Horizon(String),
    /// Search space too large for the requested mode.
    #[error("range error: {0}")]
    Range(String),
    /// A mathematical invariant failed. Never expected on valid input.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
