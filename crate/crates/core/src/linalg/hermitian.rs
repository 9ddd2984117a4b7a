use std::ops::Index;

use num_complex::Complex64;

use super::matrix::{Matrix, C64};
use crate::error::{Error, Result};

/// Relative asymmetry `‖M − M*‖_F / ‖M‖_F` absorbed by symmetrization.
pub const HERMITIAN_REL_TOL: f64 = 1e-10;

/// A square complex matrix equal to its own conjugate transpose.
///
/// Entries `(i, j)` and `(j, i)` are exact conjugates and the diagonal is real.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix(Matrix);

impl HermitianMatrix {
    /// Symmetrizes `m` to `(M + M*)/2`, rejecting asymmetry above round-off level.
    pub fn new(m: Matrix) -> Result<Self> {
        m.check_finite()?;
        let asymmetry = (&m - &m.adjoint()).frobenius_norm();
        let limit = HERMITIAN_REL_TOL * m.frobenius_norm();
        if asymmetry > limit {
            return Err(Error::NotHermitian { asymmetry, limit });
        }
        Ok(Self::symmetrize(m))
    }

    pub(crate) fn symmetrize(m: Matrix) -> Self {
        let n = m.dim();
        let mut out = m;
        for i in 0..n {
            out[(i, i)] = Complex64::new(out[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let avg = 0.5 * (out[(i, j)] + out[(j, i)].conj());
                out[(i, j)] = avg;
                out[(j, i)] = avg.conj();
            }
        }
        HermitianMatrix(out)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(Matrix::from_real_rows(rows)?)
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        HermitianMatrix(Matrix::from_diag(diag))
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix(Matrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix(Matrix::zeros(n))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    pub fn add(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        self.check_dim(other)?;
        Ok(HermitianMatrix(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        self.check_dim(other)?;
        Ok(HermitianMatrix(&self.0 - &other.0))
    }

    pub fn scale(&self, s: f64) -> HermitianMatrix {
        HermitianMatrix(self.0.scale(s))
    }

    /// `X* A X`.
    pub fn congruence(&self, x: &Matrix) -> Result<HermitianMatrix> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        Ok(Self::symmetrize(&(&x.adjoint() * &self.0) * x))
    }

    /// `diag(self, other)`.
    pub fn direct_sum(&self, other: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(self.0.direct_sum(&other.0))
    }

    pub fn check_dim(&self, other: &HermitianMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl std::fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Hermitian{:?}", self.0)
    }
}

/// `X* X` for an arbitrary square matrix.
pub fn gram(x: &Matrix) -> HermitianMatrix {
    HermitianMatrix::symmetrize(&x.adjoint() * x)
}

/// `X X*` for an arbitrary square matrix.
pub fn outer_gram(x: &Matrix) -> HermitianMatrix {
    HermitianMatrix::symmetrize(x * &x.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundoff_asymmetry_absorbed() {
        let m = Matrix::from_real_rows(&[vec![1.0, 2.0 + 1e-15], vec![2.0, 3.0]]).unwrap();
        let h = HermitianMatrix::new(m).unwrap();
        assert_eq!(h[(0, 1)], h[(1, 0)].conj());
    }

    #[test]
    fn large_asymmetry_rejected() {
        let m = Matrix::from_real_rows(&[vec![1.0, 2.0], vec![2.5, 3.0]]).unwrap();
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn diagonal_made_real() {
        let mut m = Matrix::identity(2);
        m[(0, 0)] = Complex64::new(1.0, 1e-14);
        let h = HermitianMatrix::new(m).unwrap();
        assert_eq!(h[(0, 0)].im, 0.0);
    }

    #[test]
    fn nan_rejected() {
        let m = Matrix::from_diag(&[1.0, f64::NAN]);
        assert!(HermitianMatrix::new(m).is_err());
    }
}
