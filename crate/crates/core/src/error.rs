use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Structurally invalid input: wrong shapes, non-prime characteristic,
    /// cyclic quiver, broken complex.
    #[error("malformed input: {0}")]
    Malformed(String),

    /// Two operands live over different quivers or fields.
    #[error("mismatched operands: {0}")]
    Mismatch(String),

    /// A configured enumeration bound would be exceeded.
    #[error("resource bound exceeded: {what} needs {needed}, limit is {limit}")]
    Resource {
        what: String,
        needed: String,
        limit: String,
    },

    #[error("quiver is not of finite representation type: {0}")]
    NotFiniteType(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn resource(what: impl Into<String>, needed: impl ToString, limit: impl ToString) -> Self {
        Error::Resource {
            what: what.into(),
            needed: needed.to_string(),
            limit: limit.to_string(),
        }
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}
