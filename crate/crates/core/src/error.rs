use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge {edge}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { edge: usize, vertex: usize, n: usize },
    #[error("edge {edge}: repeated vertex {vertex}")]
    RepeatedVertex { edge: usize, vertex: usize },
    #[error("edge {edge}: has {found} vertices, expected {expected}")]
    WrongEdgeSize {
        edge: usize,
        found: usize,
        expected: String,
    },
    #[error("edge {edge}: multiplicity must be positive")]
    ZeroMultiplicity { edge: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("retries exhausted after {0} attempts")]
    RetriesExhausted(usize),
    #[error("alpha out of range: {0} (need 0 < alpha <= 0.1)")]
    AlphaOutOfRange(f64),
    #[error("empty hypergraph: maximum degree is 0")]
    EmptyHypergraph,
    #[error("too large for exhaustive search: n = {n} exceeds guard {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// True for errors caused by a size guard on exhaustive routines.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::TooLarge { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
