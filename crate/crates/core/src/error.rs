use thiserror::Error;

/// Errors raised by the numeric kernels and the state pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e} exceeds {tolerance:e})")]
    NotSymmetric { asymmetry: f64, tolerance: f64 },

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("eigenvalue iteration did not converge after {iterations} sweeps")]
    NoConvergence { iterations: usize },

    #[error("expected a {expected}x{expected} matrix, got {actual}x{actual}")]
    WrongDimension { expected: usize, actual: usize },

    #[error("unsupported matrix dimension {0} (allowed: 2, 3, 4)")]
    UnsupportedDimension(usize),

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("invalid state parameters: {0}")]
    InvalidParams(String),

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("numerical instability: {0}")]
    NumericalInstability(String),

    #[error("{n} qubits exceeds the oracle cap of {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("symmetrized state vanished (norm {0:e} before normalization)")]
    ZeroState(f64),

    #[error("reduced density matrix has imaginary part {0:e}; expected a real matrix")]
    NotReal(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
