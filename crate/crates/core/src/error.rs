use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value {0}")]
    NonFinite(f64),

    /// A parameter violates its domain. `key` names the offending field the
    /// way it is spelled in configuration files.
    #[error("invalid `{key}`: {reason}")]
    Invalid { key: String, reason: String },

    #[error("cell ({0}, {1}) has an empty neighborhood")]
    EmptyNeighborhood(usize, usize),

    #[error("grid csv line {line}: {reason}")]
    GridParse { line: usize, reason: String },
}

impl Error {
    pub(crate) fn invalid(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            key: key.into(),
            reason: reason.into(),
        }
    }
}
