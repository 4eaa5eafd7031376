use thiserror::Error;

/// Errors raised by the model, engines, geometry and device builders.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{engine} supports at most {cap} atoms, got {n}")]
    Capacity {
        engine: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("integration failure at t = {time}: {reason}; try a smaller step")]
    IntegrationFailure { time: f64, reason: String },

    #[error("packing error: {0}")]
    Packing(String),

    #[error("{what} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("total event rate vanished at t = {0}")]
    ZeroRate(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
