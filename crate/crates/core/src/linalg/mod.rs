//! Dense Hermitian linear algebra: Jacobi eigendecomposition, spectral resolution,
//! functional calculus, positive semidefiniteness and the Loewner order.

mod calculus;
mod eigen;
mod hermitian;
mod interval;
mod json;
mod matrix;

pub use calculus::{
    apply, extreme_eigenvalues, functional_calculus, is_psd, loewner_leq, matrix_power, min_eigenvalue,
    operator_norm, sqrt, PSD_TOL,
};
pub use eigen::{eigh, spectral_resolution, Eigh, SpectralPair, SpectralResolution, CLUSTER_TOL, EIGH_TOL, MAX_SWEEPS};
pub use hermitian::{gram, outer_gram, HermitianMatrix, HERMITIAN_REL_TOL};
pub use interval::{Interval, DOMAIN_MARGIN};
pub use json::{parse_hermitian, parse_matrix, to_json_string, MatrixJson};
pub use matrix::{Matrix, C64};
