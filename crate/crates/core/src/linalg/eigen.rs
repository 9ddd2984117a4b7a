use num_complex::Complex64;

use super::hermitian::HermitianMatrix;
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm, relative to `‖A‖_F`, at which Jacobi sweeps stop.
pub const EIGH_TOL: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;
/// Relative gap below which neighbouring eigenvalues share one projector.
pub const CLUSTER_TOL: f64 = 1e-8;

/// Eigenvalues in ascending order with the matching unitary of column eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

/// Diagonalizes a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `a_pq` with `diag(1, e^{-iφ})` and
/// then applies the real symmetric Jacobi rotation, so the accumulated transform stays
/// unitary and `A = V·diag(λ)·V*`.
pub fn eigh(a: &HermitianMatrix, tol: f64) -> Result<Eigh> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("eigensolver tolerance must be positive, got {tol}")));
    }
    let n = a.dim();
    let mut m = a.as_matrix().clone();
    let mut v = Matrix::identity(n);
    let threshold = tol * a.frobenius_norm();

    let mut converged = false;
    let mut off = off_diagonal_norm(&m);
    for _ in 0..MAX_SWEEPS {
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        off = off_diagonal_norm(&m);
    }
    if !converged && off > threshold {
        return Err(Error::NonConvergence { sweeps: MAX_SWEEPS, off_norm: off });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = Matrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(Eigh { values, vectors })
}

fn off_diagonal_norm(m: &Matrix) -> f64 {
    let n = m.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(m: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let phase = apq / r;

    let theta = (aqq - app) / (2.0 * r);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = diag(1, conj(phase)) · [[c, s], [-s, c]]
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    let n = m.dim();
    for k in 0..n {
        let (kp, kq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = kp * g_pp + kq * g_qp;
        m[(k, q)] = kp * g_pq + kq * g_qq;
    }
    for k in 0..n {
        let (pk, qk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = g_pp.conj() * pk + g_qp.conj() * qk;
        m[(q, k)] = g_pq.conj() * pk + g_qq.conj() * qk;
    }
    for k in 0..n {
        let (kp, kq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = kp * g_pp + kq * g_qp;
        v[(k, q)] = kp * g_pq + kq * g_qq;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(app - t * r, 0.0);
    m[(q, q)] = Complex64::new(aqq + t * r, 0.0);
}

/// One distinct eigenvalue with the orthogonal projector onto its eigenspace.
#[derive(Debug, Clone)]
pub struct SpectralPair {
    pub lambda: f64,
    pub projector: HermitianMatrix,
}

/// `A = Σ λᵢ Pᵢ` with strictly increasing `λᵢ`, `PᵢPⱼ = 0` and `Σ Pᵢ = I`.
#[derive(Debug, Clone)]
pub struct SpectralResolution {
    pub pairs: Vec<SpectralPair>,
}

impl SpectralResolution {
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.lambda).collect()
    }

    /// `Σ g(λᵢ) Pᵢ`.
    pub fn combine(&self, mut g: impl FnMut(f64) -> f64) -> HermitianMatrix {
        let n = self.pairs.first().map_or(0, |p| p.projector.dim());
        let mut out = Matrix::zeros(n);
        for pair in &self.pairs {
            let w = g(pair.lambda);
            if w == 0.0 {
                continue;
            }
            out = &out + &pair.projector.as_matrix().scale(w);
        }
        HermitianMatrix::symmetrize(out)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.combine(|l| l)
    }
}

/// Groups eigenvalues whose consecutive gap is at most `cluster_tol·max(1, |λ|)` and builds
/// the projector of each group from the Jacobi eigenvectors.
pub fn spectral_resolution(a: &HermitianMatrix, cluster_tol: f64) -> Result<SpectralResolution> {
    let Eigh { values, vectors } = eigh(a, EIGH_TOL)?;
    let n = a.dim();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &lambda) in values.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if lambda - values[*g.last().unwrap()] <= cluster_tol * lambda.abs().max(1.0) => {
                g.push(i)
            }
            _ => groups.push(vec![i]),
        }
    }

    let pairs = groups
        .into_iter()
        .map(|g| {
            let lambda = g.iter().map(|&i| values[i]).sum::<f64>() / g.len() as f64;
            let mut p = Matrix::zeros(n);
            for r in 0..n {
                for c in r..n {
                    let z: Complex64 = g.iter().map(|&k| vectors[(r, k)] * vectors[(c, k)].conj()).sum();
                    p[(r, c)] = z;
                    p[(c, r)] = z.conj();
                }
            }
            SpectralPair { lambda, projector: HermitianMatrix::symmetrize(p) }
        })
        .collect();
    Ok(SpectralResolution { pairs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(a: &HermitianMatrix, e: &Eigh) -> f64 {
        let av = a.as_matrix() * &e.vectors;
        let vl = &e.vectors * &Matrix::from_diag(&e.values);
        (&av - &vl).frobenius_norm()
    }

    fn unitarity(v: &Matrix) -> f64 {
        (&(&v.adjoint() * v) - &Matrix::identity(v.dim())).frobenius_norm()
    }

    #[test]
    fn identity_eigenpairs() {
        let e = eigh(&HermitianMatrix::identity(2), EIGH_TOL).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
        assert!(unitarity(&e.vectors) < 1e-15);
    }

    #[test]
    fn diagonal_sorted_ascending() {
        let a = HermitianMatrix::from_diag(&[1.5, 0.75]);
        let e = eigh(&a, EIGH_TOL).unwrap();
        assert_eq!(e.values, vec![0.75, 1.5]);
    }

    #[test]
    fn projection_eigenvalues() {
        let b = HermitianMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let e = eigh(&b, EIGH_TOL).unwrap();
        assert!(e.values[0].abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
        assert!(residual(&b, &e) < 1e-14);
    }

    #[test]
    fn complex_hermitian() {
        // [[2, 1-i], [1+i, 3]]: trace 5, det 4, so eigenvalues 1 and 4.
        let mut m = Matrix::zeros(2);
        m[(0, 0)] = Complex64::new(2.0, 0.0);
        m[(0, 1)] = Complex64::new(1.0, -1.0);
        m[(1, 0)] = Complex64::new(1.0, 1.0);
        m[(1, 1)] = Complex64::new(3.0, 0.0);
        let a = HermitianMatrix::new(m).unwrap();
        let e = eigh(&a, EIGH_TOL).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 4.0).abs() < 1e-14);
        assert!(residual(&a, &e) < 1e-13);
        assert!(unitarity(&e.vectors) < 1e-14);
    }

    #[test]
    fn zero_matrix_converges_immediately() {
        let e = eigh(&HermitianMatrix::zeros(3), EIGH_TOL).unwrap();
        assert_eq!(e.values, vec![0.0; 3]);
    }

    #[test]
    fn nonpositive_tolerance_rejected() {
        assert!(matches!(eigh(&HermitianMatrix::identity(2), 0.0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn resolution_of_repeated_diagonal() {
        let a = HermitianMatrix::from_diag(&[2.0, 2.0, 5.0]);
        let s = spectral_resolution(&a, CLUSTER_TOL).unwrap();
        assert_eq!(s.eigenvalues(), vec![2.0, 5.0]);
        let p0 = HermitianMatrix::from_diag(&[1.0, 1.0, 0.0]);
        let p1 = HermitianMatrix::from_diag(&[0.0, 0.0, 1.0]);
        assert!(s.pairs[0].projector.sub(&p0).unwrap().frobenius_norm() < 1e-15);
        assert!(s.pairs[1].projector.sub(&p1).unwrap().frobenius_norm() < 1e-15);
    }

    #[test]
    fn resolution_of_projection() {
        let b = HermitianMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let s = spectral_resolution(&b, CLUSTER_TOL).unwrap();
        assert_eq!(s.pairs.len(), 2);
        let i_minus_b = HermitianMatrix::identity(2).sub(&b).unwrap();
        assert!(s.pairs[0].projector.sub(&i_minus_b).unwrap().frobenius_norm() < 1e-14);
        assert!(s.pairs[1].projector.sub(&b).unwrap().frobenius_norm() < 1e-14);
    }

    #[test]
    fn resolution_of_identity() {
        let s = spectral_resolution(&HermitianMatrix::identity(4), CLUSTER_TOL).unwrap();
        assert_eq!(s.pairs.len(), 1);
        assert_eq!(s.pairs[0].lambda, 1.0);
    }
}
