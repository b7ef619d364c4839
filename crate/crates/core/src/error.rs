use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid subsystem dimensions: {0}")]
    InvalidDims(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("zero vector cannot be normalized")]
    ZeroVector,
    #[error("non-finite entry in input")]
    NonFinite,
    #[error("invalid mixture weights: {0}")]
    WeightMismatch(String),
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("alpha = {0} outside the admissible range [2, 5]")]
    AlphaOutOfRange(f64),
    #[error("requested Schmidt number {requested} not realizable (max {max})")]
    BadRank { requested: usize, max: usize },
    #[error("invalid Schmidt coefficients: {0}")]
    BadCoefficients(String),
    #[error("component {index} is not a product state across the partition")]
    NotSeparableInput { index: usize },
    #[error("leading component is not entangled across the partition")]
    NotEntangled,
    #[error("expected Schmidt number {expected}, found {found}")]
    WrongSchmidtNumber { expected: usize, found: usize },
    #[error("state is not a product state")]
    NotProduct,
    #[error("invalid trial configuration: {0}")]
    InvalidConfig(String),
    #[error("example check failed: {0}")]
    ExampleMismatch(String),
    #[error("{path}: {message}")]
    Format { path: String, message: String },
    #[error("cannot access {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
