use thiserror::Error;

/// Errors raised by the numerical kernels, the oracle and the driver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{func}: argument outside the domain ({detail})")]
    Domain { func: &'static str, detail: String },

    #[error("{func}: overflow at order {order}, argument {arg}")]
    Overflow { func: &'static str, order: i64, arg: f64 },

    #[error("table capacity exceeded: order {requested} requested, {available} available")]
    Capacity { requested: usize, available: usize },

    #[error("{func}: no convergence after {terms} terms")]
    NoConvergence { func: &'static str, terms: usize },

    #[error("truncation bound stalled at {achieved:e} (target {target:e})")]
    Truncation { achieved: f64, target: f64 },

    #[error("invalid settings: {0}")]
    Settings(String),

    #[error("{0}")]
    Routing(String),

    #[error("large-order W expansion diverged at mu = {mu}")]
    TailDivergence { mu: usize },

    #[error("Neumann series did not converge after {terms} terms")]
    SeriesCap { terms: usize },

    #[error("oracle reached {achieved} of {target} requested digits")]
    Precision { achieved: u32, target: u32 },

    #[error("i/o: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { func, detail: detail.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
