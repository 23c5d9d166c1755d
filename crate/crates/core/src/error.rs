use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// A series failed to reach its tolerance before the term cap.
    #[error("series did not converge after {terms} terms (partial sum {partial_sum:e})")]
    NonConvergence { terms: usize, partial_sum: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("box constraint violated: q[{index}] = {value} is outside [0, 1]")]
    BoxViolation { index: usize, value: f64 },

    #[error("capacity constraint violated: sum of caching probabilities {sum} != cache size {cache_size}")]
    CapacityViolation { sum: f64, cache_size: usize },

    #[error("no tracked file produced a stable estimate")]
    EmptyEstimate,

    #[error("config error at `{path}`: {msg}")]
    Config { path: String, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
