use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An operation was called on an object that is not in a usable state
    /// (an empty dataset, an unfitted model, a colliding hand pose, ...).
    #[error("invalid state: {0}")]
    State(String),

    #[error("Gram matrix for hyperparameter sample {theta_index} is not positive definite after jitter {max_jitter:e}")]
    NotPositiveDefinite { theta_index: usize, max_jitter: f64 },

    #[error("surrogate failure at iteration {iteration}: {source}")]
    Surrogate {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("bad input files: {}", format_paths(.0))]
    Input(Vec<(PathBuf, String)>),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures that originate in the numerics of the surrogate.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NotPositiveDefinite { .. } => true,
            Error::Surrogate { .. } => true,
            _ => false,
        }
    }
}

fn format_paths(items: &[(PathBuf, String)]) -> String {
    items
        .iter()
        .map(|(p, why)| format!("{} ({})", p.display(), why))
        .collect::<Vec<_>>()
        .join(", ")
}
