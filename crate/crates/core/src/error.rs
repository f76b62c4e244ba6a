use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph is empty after preprocessing")]
    EmptyGraph,
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{unassigned} vertices are unassigned")]
    Unassigned { unassigned: usize },
    #[error("instance too large for exhaustive search: k^n = {bound:.3e} exceeds {limit:.0e}")]
    InstanceTooLarge { bound: f64, limit: f64 },
    #[error("k = {0} is not a power of two (hyperplane rounding needs k = 2^t, t >= 1)")]
    NotPowerOfTwo(usize),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
