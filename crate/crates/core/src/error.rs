use thiserror::Error;

/// Errors produced anywhere in the crate.
///
/// Each variant maps onto one of the process exit codes used by the
/// command-line runner (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument lies outside its mathematical domain
    /// (a probability outside `[0, 1]`, a zero-vertex graph, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The instance exceeds what an exact algorithm is allowed to enumerate.
    #[error("capacity exceeded: {what} is {got}, limit is {limit}")]
    Capacity {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    /// Malformed request: unknown names, missing arguments, bad divisibility.
    #[error("usage error: {0}")]
    Usage(String),

    /// Malformed text input.
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The property does not hold even for the complete structure, so no
    /// critical probability exists.
    #[error("no threshold: {0}")]
    NoThreshold(String),

    /// An input that makes the requested quantity meaningless,
    /// such as the expectation threshold of an edgeless graph.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A cover containing the empty set admits no feasible q.
    #[error("no feasible q: the cover contains the empty set")]
    NoFeasibleQ,

    /// A numerical routine failed to converge.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A verification run found a violated invariant.
    #[error("assertion failed: {0}")]
    Assertion(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn capacity(what: &'static str, limit: usize, got: usize) -> Self {
        Error::Capacity { what, limit, got }
    }

    /// Process exit code for this error: 2 usage, 3 capacity,
    /// 4 failed verification, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Parse { .. } | Error::Domain(_) => 2,
            Error::Capacity { .. } => 3,
            Error::Assertion(_) => 4,
            _ => 1,
        }
    }
}
