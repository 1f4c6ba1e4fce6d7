use std::path::PathBuf;

/// Errors produced by the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge after {iterations} iterations (bracket [{lo:e}, {hi:e}])")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        lo: f64,
        hi: f64,
    },

    #[error("eigen solver stopped after {} iterations with residual {:e}", .0.iterations, .0.residual)]
    EigenNotConverged(Box<crate::eigen::EigenResult>),

    #[error("hypothesis failed: {0}")]
    Hypothesis(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed table {path}: {message}")]
    Table { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A spec-string parse failure, annotated with the byte offset of the problem.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{message} at position {position} in `{input}`")]
pub struct ParseError {
    pub input: String,
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(input: &str, position: usize, message: impl Into<String>) -> Self {
        ParseError {
            input: input.to_string(),
            position,
            message: message.into(),
        }
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
