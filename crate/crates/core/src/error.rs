use thiserror::Error;

/// Errors raised by tensor construction, contraction and the inverse kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("contraction mismatch: left column modes {left:?} do not match right row modes {right:?}")]
    ContractionMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("tensor is not hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("tensor is not positive definite (smallest eigenvalue {min_eigenvalue:.6e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("weight tensor is singular")]
    SingularWeight,

    #[error("tensor has reshaping rank 0")]
    ZeroTensor,

    #[error("core matrix of the full-rank formula is numerically singular")]
    SingularCore,

    #[error("transform tensor is numerically singular")]
    SingularTransform,

    #[error("hypothesis cannot be realized: {0}")]
    HypothesisUnsatisfiable(String),

    #[error("non-finite entry produced")]
    NonFinite,

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of the numerical kernels rather than of the inputs' shapes.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::NotHermitian { .. }
                | Error::NotPositiveDefinite { .. }
                | Error::SingularWeight
                | Error::SingularCore
                | Error::SingularTransform
                | Error::ZeroTensor
                | Error::NonFinite
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
