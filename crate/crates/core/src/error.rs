use std::path::PathBuf;

/// Errors raised by the solvers, the models and the command front-end.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An input lies outside the domain an operation accepts.
    #[error("{0}")]
    Domain(String),

    /// A solver did not reach its stopping criterion, or could not tell
    /// which eigenpair was asked for.
    #[error("{0}")]
    Convergence(String),

    #[error("{}: {source}", path.display())]
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

    pub(crate) fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }

    /// Short machine-readable tag used on the command line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Convergence(_) => "convergence",
            Error::Io { .. } => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
