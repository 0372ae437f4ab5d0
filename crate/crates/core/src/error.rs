use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input that cannot describe the requested object at all.
    #[error("malformed input: {0}")]
    MalformedInput(String),

    /// A well-formed argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Cube complex violating the intersection axiom.
    #[error("malformed cubical complex: cubes {first:?} and {second:?} {reason}")]
    MalformedComplex {
        first: Vec<String>,
        second: Vec<String>,
        reason: String,
    },

    /// A checked property failed; the message carries the witness.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("resource limit exceeded: {what} (limit {limit}, reached {reached})")]
    Resource {
        what: String,
        limit: usize,
        reached: usize,
    },

    /// Two independent computations disagree. Always a bug, never resolved silently.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("arithmetic overflow in fixed-width fast path")]
    Overflow,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn malformed(msg: impl Into<String>) -> Self {
        Error::MalformedInput(msg.into())
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Verification(_) | Error::InternalConsistency(_) => 2,
            Error::Resource { .. } => 3,
            _ => 1,
        }
    }
}
