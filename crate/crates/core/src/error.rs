use thiserror::Error;

/// Errors raised by graph, group and boundary computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An enumeration grew past a configured resource cap.
    #[error("resource limit exceeded: {what} (cap {cap})")]
    ResourceLimit { what: String, cap: usize },

    /// A distance query exceeded the caller's distance cap.
    #[error("distance between {from} and {to} exceeds cap {cap}")]
    ExceedsCap { from: String, to: String, cap: u32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown vertex: {0}")]
    UnknownVertex(String),

    /// A triple with repeated vertices, or a pair with equal endpoints.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Consecutive entries of a path are not adjacent.
    #[error("not a path: entries {index} and {} are not adjacent", index + 1)]
    NotAPath { index: usize },

    #[error("unknown builtin: {0}")]
    UnknownBuiltin(String),

    /// A word problem solution was requested from a rewriting system that
    /// is not verified confluent.
    #[error("rewriting system not verified confluent: {0}")]
    Unverified(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for this error class: 2 for bad input, 3 for a
    /// resource cap, 4 for a failed verification.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceLimit { .. } | Error::ExceedsCap { .. } => 3,
            Error::Unverified(_) | Error::Verification(_) => 4,
            _ => 2,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn resource(what: impl Into<String>, cap: usize) -> Self {
        Error::ResourceLimit {
            what: what.into(),
            cap,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(format!("json: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
