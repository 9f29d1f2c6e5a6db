use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} is out of range (available up to {limit})")]
    OutOfRange {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("{path}: line {line}: {msg}")]
    Format {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("quadrature budget exceeded: best estimate {estimate_re}{estimate_im:+}i, error bound {error_bound:e}")]
    BudgetExceeded {
        estimate_re: f64,
        estimate_im: f64,
        error_bound: f64,
    },

    #[error("degenerate phase: min |phi^({k})| = {lambda:e}")]
    DegeneratePhase { k: usize, lambda: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("floor of n^c is ambiguous at n = {n}")]
    AmbiguousFloor { n: u64 },

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("{path}: {source}")]
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
}
