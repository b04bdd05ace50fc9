use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Exact evaluation or enumeration would exceed the configured budget.
    #[error("{what} too large: {size} exceeds cap {cap}")]
    TooLarge { what: String, size: u128, cap: u64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Malformed input file; `path` is a JSON-pointer-style location.
    #[error("parse error at {path}: {msg}")]
    Parse { path: String, msg: String },

    #[error("cannot read {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn parse(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            msg: msg.into(),
        }
    }
}
