use thiserror::Error;

/// Errors raised by the library. Predicates never error; they return `false`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix is singular")]
    Singular,

    #[error("element is not in {group}")]
    NotInGroup { group: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("matrix is not diagonal")]
    NotDiagonal,

    #[error("diagonal entry {index} is zero")]
    ZeroEntry { index: usize },

    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("coordinate {name} = {value} outside [-1, 1]")]
    OutOfRange { name: String, value: f64 },

    #[error("coordinates carry imaginary parts up to {max_imag:.3e}; expected realified input")]
    ComplexInput { max_imag: f64 },

    #[error("data integrity: {0}")]
    DataIntegrity(String),

    #[error("coordinates are not in the image of the trace map: {0}")]
    NotInImage(String),

    #[error("degenerate configuration not handled: {0}")]
    DegenerateUnhandled(String),

    #[error("first component has a repeated eigenvalue (gap {gap:.3e})")]
    DegenerateSpectrum { gap: f64 },

    #[error("flow did not converge (residual {residual:.3e} after {iterations} iterations)")]
    NotConverged { residual: f64, iterations: usize },

    #[error("expansion is not a polynomial: {0}")]
    NonPolynomial(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
