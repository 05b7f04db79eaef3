use thiserror::Error;

/// Errors produced by the numerical kernels and inequality checkers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows but {cols} columns")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian: ‖M − M*‖_F = {residual:e} exceeds {allowed:e}")]
    NotHermitian { residual: f64, allowed: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("eigenvalue {eigenvalue:e} lies outside the domain of {function}")]
    DomainViolation { function: &'static str, eigenvalue: f64 },

    #[error("non-positive input {value:e} to {operation}")]
    NonPositiveInput { operation: &'static str, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("spectral bounds violated: {0}")]
    BoundsViolated(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed matrix JSON: {0}")]
    MatrixJson(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for failures of an iterative numerical method (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::DomainViolation { .. })
    }
}
