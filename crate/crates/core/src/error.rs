use thiserror::Error;

/// Errors raised across the library. Each variant maps onto one of the CLI
/// exit classes: [`Error::NoPath`] and [`Error::Sampling`] are runtime
/// failures, everything else is a usage or input problem.
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("build error: {0}")]
    Build(String),

    #[error("no path from {start} to {goal} (searched {searched} vertices)")]
    NoPath { start: usize, goal: usize, searched: usize },

    #[error("invalid plan: vertices {from} and {to} are not adjacent")]
    InvalidPlan { from: usize, to: usize },

    #[error("path enumeration exceeded capacity of {cap} paths")]
    Capacity { cap: usize },

    #[error("pair sampling failed: {0}")]
    Sampling(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    /// True for failures that are not the caller's fault (exit class 1).
    pub fn is_runtime(&self) -> bool {
        matches!(self, Error::NoPath { .. } | Error::Sampling(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
