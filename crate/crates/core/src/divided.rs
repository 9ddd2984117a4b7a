//! First and second divided differences, Löwner and Kraus matrices, and randomized
//! n-monotonicity / n-convexity verdicts on sampled grids.

use rand::Rng;

use crate::error::{Error, Result};
use crate::function::{ScalarFunction, ROUNDING};
use crate::linalg::{extreme_eigenvalues, HermitianMatrix, Interval, MatrixJson, PSD_TOL};
use crate::verdict::{run_trials, Verdict, Witness, CERTIFY_TOL};

/// Relative separation below which `dd1` uses the derivative.
pub const COALESCE_TOL: f64 = 1e-7;
/// Relative spread below which `dd2` uses `f''/2` at the mean of its arguments.
pub const DD2_COALESCE_TOL: f64 = 1e-4;
/// Relative shrink applied at finite endpoints before sampling grid points.
pub const GRID_MARGIN: f64 = 1e-6;

const MAX_REDRAWS: usize = 1000;

fn separated(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() > tol * x.abs().max(y.abs()).max(1.0)
}

/// `f^[1](x, y) = (f(x) − f(y))/(x − y)`, and `f'` at the midpoint for coalescing arguments.
pub fn dd1(f: &ScalarFunction, x: f64, y: f64) -> Result<f64> {
    Ok(dd1_with_error(f, x, y)?.0)
}

/// [`dd1`] together with a first-order bound on its rounding error, which grows like
/// `ε·|f|/|x − y|` as the arguments approach each other.
pub fn dd1_with_error(f: &ScalarFunction, x: f64, y: f64) -> Result<(f64, f64)> {
    let (x, y) = (f.admit(x)?, f.admit(y)?);
    if separated(x, y, COALESCE_TOL) {
        let (fx, fy) = (f.eval(x)?, f.eval(y)?);
        let q = (fx - fy) / (x - y);
        Ok((q, (f.value_error(x, fx) + f.value_error(y, fy)) / (x - y).abs() + ROUNDING * q.abs()))
    } else {
        f.d1_with_error(0.5 * (x + y))
    }
}

/// Second divided difference, symmetric in its three arguments.
///
/// Arguments are sorted so that the outer pair is the most separated one; the recursive
/// quotient is used unless all three coalesce, in which case the value is `f''(m)/2` at
/// their mean `m` (which cancels the first-order Taylor error).
pub fn dd2(f: &ScalarFunction, x: f64, y: f64, z: f64) -> Result<f64> {
    Ok(dd2_with_error(f, x, y, z)?.0)
}

/// [`dd2`] together with an error bound in the sense of [`dd1_with_error`].
pub fn dd2_with_error(f: &ScalarFunction, x: f64, y: f64, z: f64) -> Result<(f64, f64)> {
    let mut p = [f.admit(x)?, f.admit(y)?, f.admit(z)?];
    p.sort_by(f64::total_cmp);
    let [a, b, c] = p;
    if separated(a, c, DD2_COALESCE_TOL) {
        let (ab, e_ab) = dd1_with_error(f, a, b)?;
        let (bc, e_bc) = dd1_with_error(f, b, c)?;
        let q = (ab - bc) / (a - c);
        Ok((q, (e_ab + e_bc) / (c - a) + ROUNDING * q.abs()))
    } else {
        let (d, e) = f.d2_with_error((a + b + c) / 3.0)?;
        // the mean-point rule is second order in the spread
        let spread = if c > a { (c - a) * (f.d2(c)? - f.d2(a)?).abs() } else { 0.0 };
        Ok((0.5 * d, 0.5 * (e + spread)))
    }
}

fn symmetric_from(n: usize, mut entry: impl FnMut(usize, usize) -> Result<(f64, f64)>) -> Result<(HermitianMatrix, f64)> {
    let mut rows = vec![vec![0.0; n]; n];
    let mut err2 = 0.0;
    for i in 0..n {
        for j in i..n {
            let (v, e) = entry(i, j)?;
            rows[i][j] = v;
            rows[j][i] = v;
            err2 += if i == j { e * e } else { 2.0 * e * e };
        }
    }
    Ok((HermitianMatrix::from_real_rows(&rows)?, err2.sqrt()))
}

fn check_points(points: &[f64]) -> Result<()> {
    for w in points.windows(2) {
        if !(w[0] < w[1]) || !separated(w[0], w[1], COALESCE_TOL) {
            return Err(Error::DegeneratePoints(format!("{} and {} are not strictly increasing and separated", w[0], w[1])));
        }
    }
    Ok(())
}

/// `[f^[1](λᵢ, λⱼ)]` for strictly increasing, pairwise separated points.
pub fn loewner_matrix(f: &ScalarFunction, points: &[f64]) -> Result<HermitianMatrix> {
    Ok(loewner_matrix_with_error(f, points)?.0)
}

/// The Löwner matrix and the Frobenius norm of its entrywise error bounds.
pub fn loewner_matrix_with_error(f: &ScalarFunction, points: &[f64]) -> Result<(HermitianMatrix, f64)> {
    check_points(points)?;
    symmetric_from(points.len(), |i, j| dd1_with_error(f, points[i], points[j]))
}

/// `[f^[2](base, λᵢ, λⱼ)]`.
pub fn kraus_matrix(f: &ScalarFunction, base: f64, points: &[f64]) -> Result<HermitianMatrix> {
    Ok(kraus_matrix_with_error(f, base, points)?.0)
}

/// The Kraus matrix and the Frobenius norm of its entrywise error bounds.
pub fn kraus_matrix_with_error(f: &ScalarFunction, base: f64, points: &[f64]) -> Result<(HermitianMatrix, f64)> {
    symmetric_from(points.len(), |i, j| dd2_with_error(f, base, points[i], points[j]))
}

/// Draws `n` sorted, pairwise separated points from the shrunk interior of `j`.
pub fn sample_grid(rng: &mut impl Rng, j: &Interval, n: usize) -> Result<Vec<f64>> {
    let (a, b) = j.shrunk_interior(GRID_MARGIN)?;
    for _ in 0..MAX_REDRAWS {
        let mut pts: Vec<f64> = (0..n).map(|_| rng.random_range(a..b)).collect();
        pts.sort_by(f64::total_cmp);
        if pts.windows(2).all(|w| separated(w[0], w[1], COALESCE_TOL)) {
            return Ok(pts);
        }
    }
    Err(Error::GenerationFailure { attempts: MAX_REDRAWS })
}

/// Settings shared by the grid checks.
#[derive(Debug, Clone, Copy)]
pub struct GridCheck {
    pub n: usize,
    pub grids: u64,
    pub seed: u64,
    pub tol_rel: f64,
}

impl GridCheck {
    pub fn new(n: usize, grids: u64, seed: u64) -> Self {
        GridCheck { n, grids, seed, tol_rel: PSD_TOL }
    }

    pub fn with_tol(mut self, tol_rel: f64) -> Self {
        self.tol_rel = tol_rel;
        self
    }
}

fn validate(f: &ScalarFunction, j: &Interval, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("grid size must be at least 2, got {n}")));
    }
    if !j.is_subset_of(f.domain()) {
        return Err(Error::DomainViolation(format!("{j} is not contained in the domain {} of {}", f.domain(), f.name())));
    }
    Ok(())
}

/// Returns `Some(λ_min)` when `m` violates positivity at `tol_rel` by more than `slack`,
/// an absolute bound on the error in `m` (which moves eigenvalues by at most as much).
pub(crate) fn violation(m: &HermitianMatrix, tol_rel: f64, slack: f64) -> Result<Option<f64>> {
    let (lmin, norm) = extreme_eigenvalues(m)?;
    Ok((lmin < -(tol_rel * norm.max(1.0) + slack)).then_some(lmin))
}

/// Re-derives a Löwner-matrix witness from its grid at `CERTIFY_TOL`.
pub fn recheck_loewner(f: &ScalarFunction, w: &Witness) -> Result<bool> {
    let points = w.points.as_deref().ok_or_else(|| Error::InvalidArgument("witness has no grid".into()))?;
    let (l, slack) = loewner_matrix_with_error(f, points)?;
    Ok(violation(&l, CERTIFY_TOL, slack)?.is_some())
}

/// Re-derives a Kraus-matrix witness from its base and grid at `CERTIFY_TOL`.
pub fn recheck_kraus(f: &ScalarFunction, w: &Witness) -> Result<bool> {
    let points = w.points.as_deref().ok_or_else(|| Error::InvalidArgument("witness has no grid".into()))?;
    let base = w.base.ok_or_else(|| Error::InvalidArgument("witness has no base point".into()))?;
    let (k, slack) = kraus_matrix_with_error(f, base, points)?;
    Ok(violation(&k, CERTIFY_TOL, slack)?.is_some())
}

/// Samples `grids` random n-point grids in `j` and tests every Löwner matrix for positivity.
///
/// The witness records the grid in `points` and the Löwner matrix in `matrices[0]`.
pub fn check_n_monotone(f: &ScalarFunction, j: &Interval, cfg: GridCheck) -> Result<Verdict> {
    validate(f, j, cfg.n)?;
    run_trials(cfg.grids, cfg.seed, |trial, rng| {
        let points = sample_grid(rng, j, cfg.n)?;
        let (l, slack) = loewner_matrix_with_error(f, &points)?;
        let Some(lambda_min) = violation(&l, cfg.tol_rel, slack)? else { return Ok(None) };
        let w = Witness {
            seed: cfg.seed,
            trial,
            matrices: vec![MatrixJson::from(&l)],
            lambda_min,
            points: Some(points),
            base: None,
        };
        Ok(recheck_loewner(f, &w)?.then_some(w))
    })
}

/// As [`check_n_monotone`] over Kraus matrices, with the base running over every grid point.
///
/// The witness records the grid in `points`, the base in `base` and the Kraus matrix in
/// `matrices[0]`.
pub fn check_n_convex(f: &ScalarFunction, j: &Interval, cfg: GridCheck) -> Result<Verdict> {
    validate(f, j, cfg.n)?;
    run_trials(cfg.grids, cfg.seed, |trial, rng| {
        let points = sample_grid(rng, j, cfg.n)?;
        for &base in &points {
            let (k, slack) = kraus_matrix_with_error(f, base, &points)?;
            if let Some(lambda_min) = violation(&k, cfg.tol_rel, slack)? {
                let w = Witness {
                    seed: cfg.seed,
                    trial,
                    matrices: vec![MatrixJson::from(&k)],
                    lambda_min,
                    points: Some(points.clone()),
                    base: Some(base),
                };
                if recheck_kraus(f, &w)? {
                    return Ok(Some(w));
                }
            }
        }
        Ok(None)
    })
}

/// `x ↦ f^[1](λ, x)`, the slice that is operator monotone whenever `f` is operator convex.
pub fn dd1_slice(f: &ScalarFunction, lambda: f64) -> ScalarFunction {
    let (g, g1, e, e1) = (f.clone(), f.clone(), f.clone(), f.clone());
    ScalarFunction::new(format!("dd1[{}]({lambda}, ·)", f.name()), *f.domain(), move |x| {
        dd1(&g, lambda, x).unwrap_or(f64::NAN)
    })
    .with_d1(move |x| {
        // d/dx f[λ, x] = f[λ, x, x]
        dd2(&g1, lambda, x, x).unwrap_or(f64::NAN)
    })
    .with_value_error(move |x| dd1_with_error(&e, lambda, x).map_or(f64::INFINITY, |v| v.1))
    .with_d1_error(move |x| dd2_with_error(&e1, lambda, x, x).map_or(f64::INFINITY, |v| v.1))
}

/// Helper for tests and examples: the Löwner matrix as a plain real grid.
pub fn to_real_rows(m: &HermitianMatrix) -> Vec<Vec<f64>> {
    let n = m.dim();
    (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{exp, identity, inv, power, registry};
    use crate::linalg::is_psd;

    #[test]
    fn dd1_examples() {
        let id = identity();
        assert_eq!(dd1(&id, 0.3, 7.0).unwrap(), 1.0);
        let sq = power(2.0);
        assert_eq!(dd1(&sq, 1.0, 3.0).unwrap(), 4.0);
        assert_eq!(dd1(&sq, 1.0, 1.0).unwrap(), 2.0);
    }

    #[test]
    fn dd2_examples() {
        let sq = power(2.0);
        for (x, y, z) in [(0.1, 2.0, -3.0), (1.0, 1.0, 1.0), (4.0, 4.0, -1.0)] {
            assert!((dd2(&sq, x, y, z).unwrap() - 1.0).abs() < 1e-12);
        }
        let cube = power(3.0);
        assert!((dd2(&cube, 1.0, 2.0, 3.0).unwrap() - 6.0).abs() < 1e-12);
        assert!((dd2(&cube, 1.0, 1.0, 1.0).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn dd2_is_symmetric() {
        let f = exp();
        let v = dd2(&f, 0.2, 1.1, 0.7).unwrap();
        for (x, y, z) in [(1.1, 0.2, 0.7), (0.7, 1.1, 0.2), (0.2, 0.7, 1.1)] {
            assert_eq!(dd2(&f, x, y, z).unwrap(), v);
        }
    }

    #[test]
    fn dd2_partial_coalescence() {
        // f[x, x, y] = (f'(x) − f[x, y])/(x − y); t³ gives 2x + y
        let cube = power(3.0);
        assert!((dd2(&cube, 1.0, 1.0, 2.0).unwrap() - 4.0).abs() < 1e-12);
        assert!((dd2(&cube, 1.0, 2.0, 2.0).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn loewner_matrix_examples() {
        let ones = loewner_matrix(&identity(), &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(to_real_rows(&ones), vec![vec![1.0; 3]; 3]);

        let l = loewner_matrix(&registry("sqrt").unwrap(), &[1.0, 4.0]).unwrap();
        let r = to_real_rows(&l);
        assert!((r[0][0] - 0.5).abs() < 1e-12);
        assert!((r[0][1] - 1.0 / 3.0).abs() < 1e-12);
        assert!((r[1][1] - 0.25).abs() < 1e-12);
        assert!(is_psd(&l, PSD_TOL).unwrap());

        let l = loewner_matrix(&power(2.0), &[1.0, 4.0]).unwrap();
        assert_eq!(to_real_rows(&l), vec![vec![2.0, 5.0], vec![5.0, 8.0]]);
        assert!(!is_psd(&l, PSD_TOL).unwrap());
    }

    #[test]
    fn loewner_matrix_rejects_bad_grids() {
        let f = identity();
        assert!(matches!(loewner_matrix(&f, &[2.0, 1.0]), Err(Error::DegeneratePoints(_))));
        assert!(matches!(loewner_matrix(&f, &[1.0, 1.0 + 1e-9]), Err(Error::DegeneratePoints(_))));
        assert!(matches!(loewner_matrix(&power(0.5), &[-1.0, 1.0]), Err(Error::DomainViolation(_))));
    }

    #[test]
    fn kraus_matrix_examples() {
        let k = kraus_matrix(&power(2.0), 0.3, &[-1.0, 0.5, 2.0]).unwrap();
        for row in to_real_rows(&k) {
            for v in row {
                assert!((v - 1.0).abs() < 1e-12);
            }
        }
        let cube = power(3.0).restricted(Interval::open(-1.0, 1.0).unwrap());
        let k = kraus_matrix(&cube, -0.9, &[-0.9, 0.0]).unwrap();
        assert!((k[(0, 0)].re + 2.7).abs() < 1e-12);
        assert!(!is_psd(&k, PSD_TOL).unwrap());

        let k = kraus_matrix(&power(3.0), 1.0, &[1.0, 2.0]).unwrap();
        let r = to_real_rows(&k);
        let expected = [[3.0, 4.0], [4.0, 5.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((r[i][j] - expected[i][j]).abs() < 1e-12);
            }
        }
        assert!(!is_psd(&k, PSD_TOL).unwrap());
    }

    #[test]
    fn sqrt_is_4_monotone() {
        let j = Interval::open(0.01, 100.0).unwrap();
        let v = check_n_monotone(&registry("sqrt").unwrap(), &j, GridCheck::new(4, 200, 11)).unwrap();
        assert!(v.passed, "{v:?}");
        assert_eq!(v.checks_run, 200);
    }

    #[test]
    fn square_and_exp_are_not_2_monotone() {
        let j = Interval::open(0.0, 10.0).unwrap();
        let v = check_n_monotone(&power(2.0), &j, GridCheck::new(2, 50, 7)).unwrap();
        assert!(!v.passed);
        let w = v.witness.unwrap();
        assert!(recheck_loewner(&power(2.0), &w).unwrap());

        let j = Interval::open(0.0, 2.0).unwrap();
        let v = check_n_monotone(&exp(), &j, GridCheck::new(2, 50, 7)).unwrap();
        assert!(!v.passed);
    }

    #[test]
    fn exp_witness_at_zero_one() {
        // det = e − (e − 1)² ≈ −0.2342
        let l = loewner_matrix(&exp(), &[0.0, 1.0]).unwrap();
        let det = l.as_matrix().det().re;
        let e = std::f64::consts::E;
        assert!((det - (e - (e - 1.0).powi(2))).abs() < 1e-12);
        assert!(det < -0.23);
    }

    #[test]
    fn convexity_verdicts() {
        let j = Interval::open(-3.0, 3.0).unwrap();
        assert!(check_n_convex(&power(2.0), &j, GridCheck::new(3, 100, 1)).unwrap().passed);

        let j = Interval::open(-1.0, 1.0).unwrap();
        let v = check_n_convex(&power(3.0), &j, GridCheck::new(2, 100, 1)).unwrap();
        assert!(!v.passed);
        assert!(recheck_kraus(&power(3.0), v.witness.as_ref().unwrap()).unwrap());

        let j = Interval::open(0.1, 10.0).unwrap();
        assert!(check_n_convex(&inv(), &j, GridCheck::new(3, 200, 5)).unwrap().passed);
    }

    #[test]
    fn grid_check_preconditions() {
        let j = Interval::open(-1.0, 1.0).unwrap();
        assert!(matches!(
            check_n_monotone(&power(0.5), &j, GridCheck::new(2, 10, 0)),
            Err(Error::DomainViolation(_))
        ));
        let j = Interval::open(0.0, 1.0).unwrap();
        assert!(check_n_monotone(&power(0.5), &j, GridCheck::new(1, 10, 0)).is_err());
        let unbounded = Interval::positive();
        assert!(check_n_monotone(&power(0.5), &unbounded, GridCheck::new(2, 10, 0)).is_err());
    }

    #[test]
    fn coalescence_continuity_for_exp() {
        let f = exp();
        for x in [-1.0, 0.0, 0.5, 2.0] {
            let exact = dd1(&f, x, x).unwrap();
            for h in [1e-3, 1e-6] {
                let err = (dd1(&f, x, x + h).unwrap() - exact).abs();
                // |f[x, x+h] − f'(x)| ≤ h·max|f''|/2
                assert!(err <= h * (x + h).exp() / 2.0 * 1.01 + 1e-9, "x={x} h={h} err={err}");
            }
        }
    }

    #[test]
    fn error_bounds_cover_close_points() {
        let f = exp();
        for x in [-1.0f64, 0.5, 2.0] {
            for h in [1e-2f64, 1e-4, 1e-6] {
                let exact1 = x.exp() * h.exp_m1() / h;
                let (v, e) = dd1_with_error(&f, x, x + h).unwrap();
                assert!((v - exact1).abs() <= e, "dd1 x={x} h={h}");
                // f[x, x+h, x+2h] = e^x (e^h − 1)² / (2h²)
                let exact2 = x.exp() * h.exp_m1().powi(2) / (2.0 * h * h);
                let (v, e) = dd2_with_error(&f, x, x + h, x + 2.0 * h).unwrap();
                assert!((v - exact2).abs() <= e, "dd2 x={x} h={h}: {v} vs {exact2} ± {e}");
            }
        }
    }

    #[test]
    fn close_grids_do_not_fake_counterexamples() {
        // two points 6e-4 apart: the Kraus matrix is nearly singular and its rounding noise
        // exceeds the PSD tolerance
        let f = crate::function::xlogx();
        let pts = [1.0213083646674064, 1.406857599606671, 3.993432791497004, 3.9940686709415676];
        let (k, slack) = kraus_matrix_with_error(&f, pts[2], &pts).unwrap();
        assert!(slack > 1e-9);
        assert!(violation(&k, PSD_TOL, slack).unwrap().is_none());
    }
}
