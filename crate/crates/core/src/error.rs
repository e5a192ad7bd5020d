use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a complex: {0}")]
    NotAComplex(String),

    #[error("columns are linearly dependent")]
    DependentColumns,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("modulus not prime: {0}")]
    ModulusNotPrime(u64),

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("invalid matroid: {0}")]
    InvalidMatroid(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("fan is not balanced (first failing face {face})")]
    Unbalanced { face: usize },

    #[error("operation requires {0}")]
    Unsupported(String),

    #[error("{context}: {message}")]
    Parse { context: String, message: String },

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
