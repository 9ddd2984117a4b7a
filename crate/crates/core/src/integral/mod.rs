//! Representing measures of operator monotone functions on `[0, ∞)`.
//!
//! A finite positive measure `m` on `[0, ∞]` gives `f(t) = ∫ φ_t(λ) dm(λ)` with
//! `φ_t(λ) = t(1 + λ)/(t + λ)`. This module evaluates such integrals, converts from the
//! probability-measure form on `(−1, 1)`, recovers the boundary masses of a given `f`, and
//! fits discrete measures to samples.

mod fit;
mod limits;
mod measure;
mod nnls;
mod quadrature;
mod symmetric;

pub use fit::{fit_discrete_measure, fit_grid, fit_on_nodes, log_grid, parse_samples_csv, samples_to_csv, FitResult};
pub use limits::{extract_atoms, logmean_eval, logmean_quadrature, BoundaryAtoms, LIMIT_TOL};
pub use measure::{eval_measure, measure_power, phi, Atom, Density, RepresentingMeasure};
pub use nnls::{nnls, DenseColumns, NnlsSolution};
pub use quadrature::{composite, gauss_legendre, integrate, GL_ORDER, QUAD_REL_TOL};
pub use symmetric::{
    check_k_bounds, eval_symmetric, extreme_point, mobius, mobius_inv, KBoundsReport, SymmetricMeasure, K_BOUND_TOL,
    K_GRID,
};
