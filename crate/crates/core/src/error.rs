use thiserror::Error;

/// Error taxonomy shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid shape mismatch: expected {expected} nodes, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value at node {index}")]
    NonFinite { index: usize },

    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("order a = {order} is not supported by {what} (supported: {supported})")]
    UnsupportedOrder {
        order: u32,
        what: &'static str,
        supported: &'static str,
    },

    #[error("singular argument: {0}")]
    SingularArgument(String),

    #[error("Picard iteration did not converge after {iterations} iterations (last relative increment {increment:e})")]
    Divergence { iterations: usize, increment: f64 },

    #[error("wronskian constancy spread {spread:e} exceeds {limit:e}")]
    WronskianAccuracy { spread: f64, limit: f64 },

    #[error("wronskian |W| = {value:e} is too close to zero")]
    NearDegenerate { value: f64 },

    #[error("eigenvalue census failed: {0}")]
    MissedEigenvalue(String),

    #[error("degenerate eigenvalue: |phi'(1)| = {value:e}")]
    DegenerateEigenvalue { value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operator composition needs a logarithmic kernel ({0})")]
    LogKernel(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
