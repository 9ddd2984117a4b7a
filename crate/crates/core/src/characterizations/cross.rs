//! Conversions between the two certificates of non-monotonicity: a grid whose Löwner
//! matrix is not PSD, and an ordered pair `B ≤ A` with `f(B) ≰ f(A)`.

use super::random::OrderedPair;
use super::checks::MatrixInequality;
use crate::divided::{loewner_matrix_with_error, violation};
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::linalg::{eigh, HermitianMatrix, Interval, Matrix, EIGH_TOL};
use crate::verdict::CERTIFY_TOL;

const BUMP_HALVINGS: usize = 60;
const PATH_STEPS: usize = 64;
const DISTINCT_TOL: f64 = 1e-6;

/// `λ_min(f(A) − f(B))` when it certifies `f(B) ≰ f(A)` at [`CERTIFY_TOL`].
pub fn pair_violation(f: &ScalarFunction, pair: &OrderedPair) -> Result<Option<f64>> {
    let inputs = [pair.a.as_matrix().clone(), pair.b.as_matrix().clone()];
    MatrixInequality::Monotone { f: f.clone() }.violation(&inputs, CERTIFY_TOL)
}

/// From grid points with a non-PSD Löwner matrix to an ordered pair violating monotonicity.
///
/// Uses `B = diag(points)` and `A = B + ε·J` with `J` the all-ones matrix, so that to first
/// order `f(A) − f(B) = ε·L`. `ε` starts at a tenth of the smallest gap and is halved until
/// the violation is certified. Returns `None` if no `ε` works.
pub fn loewner_witness_to_pair(f: &ScalarFunction, j: &Interval, points: &[f64]) -> Result<Option<OrderedPair>> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    let gap = points.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if !(gap > 0.0) {
        return Err(Error::DegeneratePoints("points must be strictly increasing".into()));
    }
    let n = points.len();
    let b = HermitianMatrix::from_diag(points);
    let top = points[n - 1];
    let mut eps = 0.1 * gap;
    for _ in 0..BUMP_HALVINGS {
        // λ_max(A) ≤ top + n·ε
        if j.contains(top + n as f64 * eps) {
            let bump = HermitianMatrix::new(Matrix::from_fn(n, |_, _| eps.into()))?;
            let pair = OrderedPair { a: b.add(&bump)?, b: b.clone() };
            if pair_violation(f, &pair)?.is_some() {
                return Ok(Some(pair));
            }
        }
        eps *= 0.5;
    }
    Ok(None)
}

fn distinct_sorted(values: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(values.len());
    for &v in values {
        match out.last() {
            Some(&last) if v - last <= DISTINCT_TOL * v.abs().max(last.abs()).max(1.0) => {}
            _ => out.push(v),
        }
    }
    out
}

/// From an ordered pair violating monotonicity to grid points with a non-PSD Löwner matrix.
///
/// Walks the segment `B + s(A − B)` and returns the distinct eigenvalues at the first `s`
/// whose Löwner matrix violates positivity at [`CERTIFY_TOL`]. The integral form of
/// `f(A) − f(B)` guarantees such an `s` exists when the pair violates monotonicity.
pub fn pair_to_loewner_witness(f: &ScalarFunction, pair: &OrderedPair) -> Result<Option<Vec<f64>>> {
    let diff = pair.a.sub(&pair.b)?;
    let mut steps: Vec<f64> = (0..=PATH_STEPS).map(|k| k as f64 / PATH_STEPS as f64).collect();
    // midpoints first: eigenvalues at the endpoints may sit on the domain boundary
    steps.sort_by(|x, y| (x - 0.5).abs().total_cmp(&(y - 0.5).abs()));
    for s in steps {
        let m = pair.b.add(&diff.scale(s))?;
        let values: Vec<f64> = eigh(&m, EIGH_TOL)?.values.into_iter().map(|l| f.admit(l)).collect::<Result<_>>()?;
        let points = distinct_sorted(&values);
        if points.len() < 2 {
            continue;
        }
        let (l, slack) = loewner_matrix_with_error(f, &points)?;
        if violation(&l, CERTIFY_TOL, slack)?.is_some() {
            return Ok(Some(points));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function;

    #[test]
    fn square_grid_to_pair() {
        let f = function::power(2.0);
        let j = Interval::closed_open(0.0, 10.0).unwrap();
        // f^[1] on {1, 4} is [[2, 5], [5, 8]], not PSD
        let pair = loewner_witness_to_pair(&f, &j, &[1.0, 4.0]).unwrap().unwrap();
        assert!(OrderedPair::new(pair.a.clone(), pair.b.clone(), &j).is_ok());
        assert!(pair_violation(&f, &pair).unwrap().is_some());
    }

    #[test]
    fn monotone_function_has_no_pair() {
        let j = Interval::open(0.0, 10.0).unwrap();
        assert!(loewner_witness_to_pair(&function::power(0.5), &j, &[1.0, 4.0]).unwrap().is_none());
    }

    #[test]
    fn reference_pair_to_grid() {
        let (a, b) = super::super::tp_pair();
        let f = function::power(2.0);
        let pair = OrderedPair { a, b };
        let points = pair_to_loewner_witness(&f, &pair).unwrap().unwrap();
        assert_eq!(points.len(), 2);
        let (l, slack) = loewner_matrix_with_error(&f, &points).unwrap();
        assert!(violation(&l, CERTIFY_TOL, slack).unwrap().is_some());
    }

    #[test]
    fn dedup() {
        assert_eq!(distinct_sorted(&[1.0, 1.0 + 1e-12, 2.0]), vec![1.0, 2.0]);
    }
}
