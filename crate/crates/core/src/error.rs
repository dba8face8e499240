use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate statistic: {0}")]
    DegenerateStatistic(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("non-finite fitness {value} at iteration {iteration}, particle {particle}, position {position:?}")]
    NonFiniteFitness {
        iteration: usize,
        particle: usize,
        position: Vec<f64>,
        value: f64,
    },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("i/o error on {path}: {source}")]
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
}
