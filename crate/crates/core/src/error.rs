use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension {0}: must be at least 1")]
    InvalidDimension(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("unsupported dimension {got}: operation requires d = {expected}")]
    UnsupportedDimension { got: usize, expected: usize },
    #[error("state vector is not normalized (norm = {0})")]
    NotNormalized(f64),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("trace is {0}, expected 1")]
    TraceNotOne(f64),
    #[error("{name} = {value} outside domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("p0 = {0} is an endpoint of the open interval (1 - epsilon, 1)")]
    Endpoint(f64),
    #[error("code book is empty")]
    EmptyBook,
    #[error("label {0} is not in the code book")]
    UnknownLabel(usize),
    #[error("invalid label distribution: {0}")]
    InvalidDistribution(String),
    #[error("malformed serialized data: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        domain,
    }
}
