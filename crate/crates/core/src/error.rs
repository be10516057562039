use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid degree {got}: need at least {min}")]
    InvalidDegree { got: usize, min: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("invalid material `{name}`: {reason}")]
    InvalidMaterial { name: String, reason: String },

    /// Bad user-facing configuration. `key` names the offending entry.
    #[error("configuration error at `{key}`: {message}")]
    Configuration { key: String, message: String },

    #[error("assembly error: {0}")]
    Assembly(String),

    #[error("partition error: {0}")]
    Partition(String),

    #[error("transform error: {0}")]
    Transform(String),

    #[error("solver error: {0}")]
    Solver(String),

    #[error("negative eigenvalue {value:e} below tolerance -{tolerance:e}")]
    NegativeEigenvalue { value: f64, tolerance: f64 },

    #[error("report error: {0}")]
    Report(String),

    #[error("at k-sample {index} (k_x = {k_x:e}, k_y = {k_y:e}): {source}")]
    AtWaveVector {
        index: usize,
        k_x: f64,
        k_y: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("malformed result file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Configuration {
            key: key.into(),
            message: message.into(),
        }
    }
}
