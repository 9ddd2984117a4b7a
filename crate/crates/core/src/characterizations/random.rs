use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::divided::GRID_MARGIN;
use crate::error::{Error, Result};
use crate::linalg::{eigh, loewner_leq, operator_norm, HermitianMatrix, Interval, Matrix, EIGH_TOL, PSD_TOL};

/// Probability that a sampled eigenvalue is placed exactly on a closed endpoint at 0.
pub const ZERO_EIGENVALUE_PROB: f64 = 0.1;
const MAX_REJECTIONS: usize = 1000;

fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix(n: usize, rng: &mut impl Rng) -> Matrix {
    Matrix::from_fn(n, |_, _| complex_gaussian(rng))
}

/// Unitary from Gram–Schmidt (two passes per column) on an i.i.d. complex Gaussian matrix.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> Matrix {
    loop {
        let g = gaussian_matrix(n, rng);
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        let mut ok = true;
        for j in 0..n {
            let mut v = g.column(j);
            for _ in 0..2 {
                for q in &cols {
                    let proj: Complex64 = q.iter().zip(&v).map(|(qi, vi)| qi.conj() * vi).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= proj * qi;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            v.iter_mut().for_each(|z| *z /= norm);
            cols.push(v);
        }
        if ok {
            return Matrix::from_fn(n, |r, c| cols[c][r]);
        }
    }
}

/// `U·diag(values)·U*`.
pub fn conjugate_diag(u: &Matrix, values: &[f64]) -> HermitianMatrix {
    let d = HermitianMatrix::from_diag(values);
    d.congruence(&u.adjoint()).expect("dimensions agree")
}

/// Eigenvalues drawn in `j`: uniform on the shrunk interior, plus exact zeros with
/// probability [`ZERO_EIGENVALUE_PROB`] when `j` is closed at 0.
pub fn sample_spectrum(j: &Interval, n: usize, rng: &mut impl Rng) -> Result<Vec<f64>> {
    let (a, b) = j.shrunk_interior(GRID_MARGIN)?;
    let zero_endpoint = j.lo() == 0.0 && j.lo_closed();
    Ok((0..n)
        .map(|_| {
            if zero_endpoint && rng.random_bool(ZERO_EIGENVALUE_PROB) {
                0.0
            } else {
                rng.random_range(a..b)
            }
        })
        .collect())
}

/// Hermitian matrix with spectrum in `j`, rotated by a random unitary.
pub fn random_hermitian(j: &Interval, n: usize, rng: &mut impl Rng) -> Result<HermitianMatrix> {
    let values = sample_spectrum(j, n, rng)?;
    let u = random_unitary(n, rng);
    Ok(conjugate_diag(&u, &values))
}

/// `P = U·diag(1,…,1,0,…,0)·U*` with the given rank.
pub fn random_projection(n: usize, rank: usize, rng: &mut impl Rng) -> HermitianMatrix {
    let diag: Vec<f64> = (0..n).map(|i| if i < rank { 1.0 } else { 0.0 }).collect();
    conjugate_diag(&random_unitary(n, rng), &diag)
}

/// Gaussian matrix divided by `max(1 + 1e-12, ‖G‖₂)`.
pub fn random_contraction(n: usize, rng: &mut impl Rng) -> Result<Matrix> {
    let g = gaussian_matrix(n, rng);
    let norm = operator_norm(&g)?;
    Ok(g.scale(1.0 / norm.max(1.0 + 1e-12)))
}

/// Random PSD matrix of random rank with operator norm 1.
fn unit_psd_bump(n: usize, rng: &mut impl Rng) -> Result<HermitianMatrix> {
    let rank = rng.random_range(1..=n);
    let diag: Vec<f64> = (0..n).map(|i| if i < rank { rng.random_range(0.0..1.0) } else { 0.0 }).collect();
    let top = diag.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return Ok(HermitianMatrix::zeros(n));
    }
    let diag: Vec<f64> = diag.iter().map(|d| d / top).collect();
    Ok(conjugate_diag(&random_unitary(n, rng), &diag))
}

/// `B ≤ A`, both with spectra in the configured interval.
#[derive(Debug, Clone)]
pub struct OrderedPair {
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
}

impl OrderedPair {
    /// Validates `B ≤ A` and that both spectra lie in `j`.
    pub fn new(a: HermitianMatrix, b: HermitianMatrix, j: &Interval) -> Result<Self> {
        if !loewner_leq(&b, &a, PSD_TOL)? {
            return Err(Error::InvalidArgument("B ≤ A does not hold".into()));
        }
        for (name, m) in [("A", &a), ("B", &b)] {
            for l in eigh(m, EIGH_TOL)?.values {
                if j.admit(l).is_none() {
                    return Err(Error::DomainViolation(format!("eigenvalue {l:e} of {name} lies outside {j}")));
                }
            }
        }
        Ok(OrderedPair { a, b })
    }
}

/// Samples `B`, then `A = B + Q` with a PSD bump `Q` whose norm leaves room below the upper end.
pub fn random_ordered_pair(j: &Interval, n: usize, rng: &mut impl Rng) -> Result<OrderedPair> {
    random_ordered_pair_scaled(j, n, 1.0, rng)
}

/// As [`random_ordered_pair`] with the bump norm multiplied by `scale ∈ [0, 1]`.
pub fn random_ordered_pair_scaled(j: &Interval, n: usize, scale: f64, rng: &mut impl Rng) -> Result<OrderedPair> {
    let (_, top) = j.shrunk_interior(GRID_MARGIN)?;
    for _ in 0..MAX_REJECTIONS {
        let values = sample_spectrum(j, n, rng)?;
        let u = random_unitary(n, rng);
        let b = conjugate_diag(&u, &values);
        let room = top - values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let size = scale * room * rng.random_range(0.0..1.0);
        let q = unit_psd_bump(n, rng)?.scale(size);
        let a = b.add(&q)?;
        let a_values = eigh(&a, EIGH_TOL)?.values;
        if a_values.iter().all(|&l| j.admit(l).is_some()) {
            return Ok(OrderedPair { a, b });
        }
    }
    Err(Error::GenerationFailure { attempts: MAX_REJECTIONS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_psd;
    use crate::verdict::trial_rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = trial_rng(1, 0);
        for n in 1..=8 {
            let u = random_unitary(n, &mut rng);
            let e = (&(&u.adjoint() * &u) - &Matrix::identity(n)).frobenius_norm();
            assert!(e < 1e-13, "n={n} err={e}");
        }
    }

    #[test]
    fn hermitian_spectrum_inside_interval() {
        let mut rng = trial_rng(2, 0);
        let j = Interval::open(0.0, 1.0).unwrap();
        let one = random_hermitian(&j, 1, &mut rng).unwrap();
        assert!(one[(0, 0)].re > 0.0 && one[(0, 0)].re < 1.0);
        for n in 2..=6 {
            let h = random_hermitian(&j, n, &mut rng).unwrap();
            for l in eigh(&h, EIGH_TOL).unwrap().values {
                assert!(j.admit(l).is_some());
            }
        }
    }

    #[test]
    fn zero_insertion_only_on_closed_zero() {
        let mut rng = trial_rng(3, 0);
        let closed = Interval::closed_open(0.0, 1.0).unwrap();
        let open = Interval::open(0.0, 1.0).unwrap();
        let zeros = |j: &Interval, rng: &mut _| {
            (0..200).map(|_| sample_spectrum(j, 4, rng).unwrap().iter().filter(|&&x| x == 0.0).count()).sum::<usize>()
        };
        assert!(zeros(&closed, &mut rng) > 20);
        assert_eq!(zeros(&open, &mut rng), 0);
    }

    #[test]
    fn unbounded_interval_rejected() {
        let mut rng = trial_rng(4, 0);
        assert!(random_hermitian(&Interval::positive(), 2, &mut rng).is_err());
    }

    #[test]
    fn ordered_pairs_are_ordered() {
        let mut rng = trial_rng(5, 0);
        let j = Interval::closed_open(0.0, 10.0).unwrap();
        for n in 1..=6 {
            let p = random_ordered_pair(&j, n, &mut rng).unwrap();
            assert!(is_psd(&p.a.sub(&p.b).unwrap(), PSD_TOL).unwrap());
            OrderedPair::new(p.a, p.b, &j).unwrap();
        }
    }

    #[test]
    fn zero_bump_gives_equal_pair() {
        let mut rng = trial_rng(6, 0);
        let j = Interval::open(-1.0, 1.0).unwrap();
        let p = random_ordered_pair_scaled(&j, 3, 0.0, &mut rng).unwrap();
        assert_eq!(p.a, p.b);
    }

    #[test]
    fn reference_pair_is_ordered() {
        let a = HermitianMatrix::from_diag(&[1.5, 0.75]);
        let b = HermitianMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let j = Interval::closed_open(0.0, 2.0).unwrap();
        assert!(OrderedPair::new(a.clone(), b.clone(), &j).is_ok());
        assert!(OrderedPair::new(b, a, &j).is_err());
    }

    #[test]
    fn contractions() {
        let mut rng = trial_rng(7, 0);
        for n in 1..=6 {
            let x = random_contraction(n, &mut rng).unwrap();
            assert!(operator_norm(&x).unwrap() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn projections_are_idempotent() {
        let mut rng = trial_rng(8, 0);
        let p = random_projection(5, 2, &mut rng);
        let p2 = p.as_matrix() * p.as_matrix();
        assert!((&p2 - p.as_matrix()).frobenius_norm() < 1e-13);
        assert!((p.as_matrix().trace().re - 2.0).abs() < 1e-13);
    }
}
