use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    Shape {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix has a non-finite entry")]
    NonFinite,
    #[error("Kraus list is empty")]
    EmptyKraus,
    #[error("generator set is empty")]
    EmptyGenerators,
    #[error("channel is not unital (residual {0:.3e})")]
    NotUnital(f64),
    #[error("channel is not trace preserving (residual {0:.3e})")]
    NotTracePreserving(f64),
    #[error("mixing matrix is not an isometry (residual {0:.3e})")]
    NotIsometry(f64),
    #[error("range projector does not factor as 1 ⊗ P (residual {0:.3e})")]
    Factorization(f64),
    #[error("dissipation form is not positive semidefinite (min eigenvalue {min:.3e}, max {max:.3e})")]
    IndefiniteForm { min: f64, max: f64 },
    #[error("algebra closure exceeded dimension {0}")]
    ClosureOverflow(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
