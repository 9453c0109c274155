use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid input: parameters, indices, or states outside their domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested Hilbert space exceeds a configured size cap.
    #[error("resource limit exceeded: {what} needs {requested}, cap is {cap}")]
    Resource {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    /// The inputs leave the regime in which a formula or method holds.
    #[error("unsupported regime: {0}")]
    Regime(String),

    /// A quantity divides by a vanishing magnon frequency.
    #[error("singular: magnon frequency omega_{k} vanishes")]
    Singular { k: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn regime(msg: impl Into<String>) -> Self {
        Error::Regime(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Precondition(_) | Error::Config(_) | Error::Resource { .. } => 2,
            Error::Regime(_) | Error::Singular { .. } => 3,
            Error::Io { .. } => 4,
        }
    }

    /// Short tag written into sweep rows that failed.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Resource { .. } => "resource",
            Error::Regime(_) => "regime",
            Error::Singular { .. } => "singular",
            Error::Precondition(_) => "precondition",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
        }
    }
}
