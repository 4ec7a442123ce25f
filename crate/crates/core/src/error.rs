use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("empty matrix: dimension must be at least 1")]
    EmptyMatrix,

    #[error("eigendecomposition failed to converge (spectral norm estimate {norm:e})")]
    NoConvergence { norm: f64 },

    #[error("eigenvalue {eigenvalue:e} lies outside the domain of `{function}` (lower bound {bound:e}, tol {tol:e})")]
    Domain {
        function: String,
        eigenvalue: f64,
        bound: f64,
        tol: f64,
    },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e} < -{tol:e}")]
    NotPsd { eigenvalue: f64, tol: f64 },

    #[error("matrix is singular within tolerance: smallest eigenvalue {eigenvalue:e} <= {tol:e}")]
    Singular { eigenvalue: f64, tol: f64 },

    #[error("matrix is not an orthogonal projection (idempotency defect {defect:e} > {tol:e})")]
    NotProjection { defect: f64, tol: f64 },

    #[error("function `{function}` is not normalized: f(1) = {value}")]
    Unnormalized { function: String, value: f64 },

    #[error("function `{function}` takes negative value {value:e} at {at:e}")]
    NegativeFunction { function: String, at: f64, value: f64 },

    #[error("invalid mean representation: {0}")]
    InvalidRepresentation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("function evaluation failed: `{function}` returned {value} at {at}")]
    Evaluation { function: String, at: f64, value: f64 },

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
