use std::path::PathBuf;

/// Errors produced by the gamble model, the calibration procedure and the
/// ensemble driver.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("non-finite wealth for gamma = {gamma}, eta = {eta} in run {run} at t = {t}")]
    NonFiniteWealth {
        gamma: f64,
        eta: f64,
        run: u64,
        t: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            domain,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
