use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong while building or solving a model.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("dimension mismatch: expected {expected} values, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("operator row mass {mass:.12} at node {node} exceeds 1; use the cell-integral rule")]
    RowMassExceeded { node: usize, mass: f64 },

    #[error("interval [{t0}, {t1}] is not contained in a single {expected} season")]
    SeasonStraddle {
        t0: f64,
        t1: f64,
        expected: &'static str,
    },

    #[error(
        "positivity violated at node {node} (t = {time}): value {value:e}; \
         retry with dt_good <= {suggested_dt:e}"
    )]
    PositivityViolation {
        node: usize,
        time: f64,
        value: f64,
        suggested_dt: f64,
    },

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    EigenNoConvergence { iterations: usize, residual: f64 },

    #[error("no sign change of the threshold eigenvalue up to length {max_length} ({reason})")]
    BracketExpansion { max_length: f64, reason: String },

    #[error(
        "period-map iteration budget of {periods} periods exhausted with gap {gap:e} \
         (threshold eigenvalue {lambda1:e})"
    )]
    BudgetExhausted {
        periods: usize,
        gap: f64,
        lambda1: f64,
    },

    #[error("regime not supported: {0}")]
    Regime(String),

    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for problems with the user's input rather than with a solve.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::InvalidKernel(_)
                | Error::InvalidGrid(_)
                | Error::Config { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
