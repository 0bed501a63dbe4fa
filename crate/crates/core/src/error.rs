use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid domain ({a}, {b}): endpoints must be finite with a < b")]
    InvalidDomain { a: f64, b: f64 },

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("value dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "adaptive quadrature exhausted {budget} subdivisions \
         (error estimate {error:e} > tolerance {tolerance:e})"
    )]
    QuadratureFailure { budget: usize, error: f64, tolerance: f64 },

    #[error("composition is not defined for functions with Cantor components")]
    UnsupportedCantorComposition,

    #[error("recession function does not exist at x={x} (final probe spread {spread:e})")]
    NoRecession { x: f64, spread: f64 },

    #[error("integrand `{name}` is not positively 1-homogeneous (defect {defect:e})")]
    NotHomogeneous { name: String, defect: f64 },

    #[error("test function support [{lo}, {hi}] is not compactly contained in ({a}, {b})")]
    SupportViolation { lo: f64, hi: f64, a: f64, b: f64 },

    #[error("unknown name `{0}`")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;
