use super::eigen::{eigh, spectral_resolution, CLUSTER_TOL, EIGH_TOL};
use super::hermitian::{gram, HermitianMatrix};
use super::interval::Interval;
use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::function::ScalarFunction;

/// Relative one-sided slack for positive semidefiniteness.
pub const PSD_TOL: f64 = 1e-9;

/// `f(A) = Σ f(λᵢ) Pᵢ` over the spectral resolution of `A`.
pub fn functional_calculus(f: &ScalarFunction, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    map_spectrum(a, f.domain(), |x| (f.value(x), f.name()))
}

/// Applies a closure to the spectrum after checking it against `domain` with the margin rule.
pub fn apply(a: &HermitianMatrix, domain: &Interval, g: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    map_spectrum(a, domain, |x| (g(x), "function"))
}

fn map_spectrum<'a>(
    a: &HermitianMatrix,
    domain: &Interval,
    g: impl Fn(f64) -> (f64, &'a str),
) -> Result<HermitianMatrix> {
    let res = spectral_resolution(a, CLUSTER_TOL)?;
    let mut values = Vec::with_capacity(res.pairs.len());
    for pair in &res.pairs {
        let x = domain.admit(pair.lambda).ok_or_else(|| {
            Error::DomainViolation(format!("eigenvalue {:e} lies outside {domain}", pair.lambda))
        })?;
        let (y, name) = g(x);
        if !y.is_finite() {
            return Err(Error::NonFinite(format!("{name}({x:e}) = {y}")));
        }
        values.push(y);
    }
    let mut it = values.into_iter();
    Ok(res.combine(|_| it.next().unwrap()))
}

/// `A^r` through the functional calculus; `r < 0` needs a positive definite `A`.
pub fn matrix_power(a: &HermitianMatrix, r: f64) -> Result<HermitianMatrix> {
    let domain = if r >= 0.0 { Interval::nonnegative() } else { Interval::positive() };
    apply(a, &domain, |x| if r == 0.0 { 1.0 } else { x.powf(r) })
}

pub fn sqrt(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    matrix_power(a, 0.5)
}

pub fn min_eigenvalue(m: &HermitianMatrix) -> Result<f64> {
    Ok(eigh(m, EIGH_TOL)?.values.first().copied().unwrap_or(0.0))
}

/// Smallest eigenvalue together with the spectral norm.
pub fn extreme_eigenvalues(m: &HermitianMatrix) -> Result<(f64, f64)> {
    let values = eigh(m, EIGH_TOL)?.values;
    let lo = values.first().copied().unwrap_or(0.0);
    let hi = values.last().copied().unwrap_or(0.0);
    Ok((lo, lo.abs().max(hi.abs())))
}

/// `λ_min(M) ≥ −tol_rel·max(1, ‖M‖₂)`.
pub fn is_psd(m: &HermitianMatrix, tol_rel: f64) -> Result<bool> {
    let (lmin, norm) = extreme_eigenvalues(m)?;
    Ok(lmin >= -tol_rel * norm.max(1.0))
}

/// `A ≤ B` in the Loewner order.
pub fn loewner_leq(a: &HermitianMatrix, b: &HermitianMatrix, tol_rel: f64) -> Result<bool> {
    is_psd(&b.sub(a)?, tol_rel)
}

/// Spectral norm `sqrt(λ_max(X*X))`.
pub fn operator_norm(x: &Matrix) -> Result<f64> {
    x.check_finite()?;
    let values = eigh(&gram(x), EIGH_TOL)?.values;
    Ok(values.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}
