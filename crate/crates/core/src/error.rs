use thiserror::Error;

/// Errors produced by the numerical kernels and model builders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("QR iteration did not converge: {deflated} of {n} eigenvalues deflated")]
    Convergence { deflated: usize, n: usize },

    #[error("closed form only available for potential order m = 1 (got m = {0})")]
    UnsupportedOrder(u32),

    #[error("parameter out of range: {0}")]
    ParameterRange(String),

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("base energy lies on the spectral curve (distance {distance:e})")]
    SingularBase { distance: f64 },

    #[error("degenerate curve: {0}")]
    Degenerate(String),

    #[error("envelope fit needs at least 3 maxima, found {found}")]
    InsufficientStructure { found: usize },

    #[error("base energy {re}{im:+}i is not interior to the PBC parabola")]
    Exterior { re: f64, im: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
