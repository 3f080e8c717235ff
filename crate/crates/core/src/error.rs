use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("root solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("element kind does not belong to this group: expected {expected}, found {found}")]
    KindMismatch { expected: String, found: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("element {element} lies outside the enumerated ball of radius {radius}")]
    OutOfRange { element: String, radius: u32 },
    #[error("matrix is not unimodular (det = {0})")]
    NonUnimodular(String),
    #[error("columns are linearly dependent")]
    DependentColumns,
    #[error("subgroup is not invariant: image of generator {generator} ({image}) leaves the subgroup")]
    NotInvariant { generator: usize, image: String },
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
