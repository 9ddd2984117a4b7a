use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NonConvergence { sweeps: usize, off_norm: f64 },

    #[error("matrix is not Hermitian: ‖M − M*‖_F = {asymmetry:e} exceeds {limit:e}")]
    NotHermitian { asymmetry: f64, limit: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("grid points are not pairwise distinct: {0}")]
    DegeneratePoints(String),

    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("random generation failed after {attempts} rejections")]
    GenerationFailure { attempts: usize },

    #[error("quadrature did not reach relative tolerance {tol:e} (last change {last_change:e})")]
    QuadratureFailure { tol: f64, last_change: f64 },

    #[error("limit did not stabilize: {0}")]
    LimitNotConverged(String),

    #[error("NNLS active-set iteration exceeded {max_iter} iterations")]
    SolverNotConverged { max_iter: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Numerical non-convergence, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::QuadratureFailure { .. }
                | Error::LimitNotConverged(_)
                | Error::SolverNotConverged { .. }
                | Error::GenerationFailure { .. }
        )
    }
}
