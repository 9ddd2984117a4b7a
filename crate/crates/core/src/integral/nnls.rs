//! Lawson–Hanson active-set nonnegative least squares for small dense problems.

use crate::error::{Error, Result};

/// Dense column-major `m × n` matrix.
#[derive(Debug, Clone)]
pub struct DenseColumns {
    pub rows: usize,
    pub cols: Vec<Vec<f64>>,
}

impl DenseColumns {
    pub fn new(rows: usize, cols: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(c) = cols.iter().find(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch { expected: rows, found: c.len() });
        }
        Ok(DenseColumns { rows, cols })
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.rows];
        for (c, &xj) in self.cols.iter().zip(x) {
            if xj != 0.0 {
                for (yi, ci) in y.iter_mut().zip(c) {
                    *yi += ci * xj;
                }
            }
        }
        y
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Least squares `min ‖A_S s − b‖` over the columns `S` by Householder QR.
fn lstsq(a: &DenseColumns, set: &[usize], b: &[f64]) -> Vec<f64> {
    let m = a.rows;
    let k = set.len();
    let mut q: Vec<Vec<f64>> = set.iter().map(|&j| a.cols[j].clone()).collect();
    let mut rhs = b.to_vec();
    let mut diag = vec![0.0; k];
    for j in 0..k.min(m) {
        let norm = q[j][j..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if q[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = q[j][j..].to_vec();
        v[0] -= alpha;
        let vnorm2 = dot(&v, &v);
        diag[j] = alpha;
        if vnorm2 == 0.0 {
            continue;
        }
        for col in q.iter_mut().skip(j + 1) {
            let s = 2.0 * dot(&v, &col[j..]) / vnorm2;
            col[j..].iter_mut().zip(&v).for_each(|(c, vi)| *c -= s * vi);
        }
        let s = 2.0 * dot(&v, &rhs[j..]) / vnorm2;
        rhs[j..].iter_mut().zip(&v).for_each(|(c, vi)| *c -= s * vi);
        q[j][j] = alpha;
    }
    let mut x = vec![0.0; k];
    for j in (0..k.min(m)).rev() {
        let mut s = rhs[j];
        for (i, xi) in x.iter().enumerate().skip(j + 1) {
            s -= q[i][j] * xi;
        }
        x[j] = if diag[j] != 0.0 { s / diag[j] } else { 0.0 };
    }
    x
}

#[derive(Debug, Clone)]
pub struct NnlsSolution {
    pub x: Vec<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
}

/// `min ‖Ax − b‖₂` subject to `x ≥ 0`.
///
/// Columns are scaled to unit norm internally. The iteration count covers both the outer
/// loop and the inner feasibility loop and is capped at `max_iter`.
pub fn nnls(a: &DenseColumns, b: &[f64], max_iter: usize) -> Result<NnlsSolution> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch { expected: a.rows, found: b.len() });
    }
    let n = a.ncols();
    let scales: Vec<f64> = a.cols.iter().map(|c| dot(c, c).sqrt()).collect();
    let scaled = DenseColumns {
        rows: a.rows,
        cols: a.cols.iter().zip(&scales).map(|(c, &s)| c.iter().map(|v| if s > 0.0 { v / s } else { 0.0 }).collect()).collect(),
    };
    let b_norm = dot(b, b).sqrt();
    let tol = 16.0 * f64::EPSILON * b_norm.max(f64::MIN_POSITIVE) * (a.rows as f64).sqrt();

    let mut x = vec![0.0; n];
    let mut passive = vec![false; n];
    let mut blocked = vec![false; n];
    let mut iterations = 0;
    loop {
        let r: Vec<f64> = b.iter().zip(scaled.mul(&x)).map(|(bi, ai)| bi - ai).collect();
        let w: Vec<f64> = scaled.cols.iter().map(|c| dot(c, &r)).collect();
        let candidate = (0..n)
            .filter(|&j| !passive[j] && !blocked[j] && scales[j] > 0.0 && w[j] > tol)
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = candidate else { break };
        passive[j] = true;
        loop {
            iterations += 1;
            if iterations > max_iter {
                return Err(Error::SolverNotConverged { max_iter });
            }
            let set: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let s = lstsq(&scaled, &set, b);
            if s.iter().all(|&v| v > 0.0) {
                for (&i, &v) in set.iter().zip(&s) {
                    x[i] = v;
                }
                break;
            }
            let mut alpha = 1.0f64;
            for (&i, &v) in set.iter().zip(&s) {
                if v <= 0.0 {
                    alpha = alpha.min(x[i] / (x[i] - v));
                }
            }
            let mut any_left = false;
            for (&i, &v) in set.iter().zip(&s) {
                x[i] += alpha * (v - x[i]);
                if x[i] <= 1e-15 * b_norm.max(1.0) {
                    x[i] = 0.0;
                    passive[i] = false;
                } else {
                    any_left = true;
                }
            }
            if !passive[j] && x[j] == 0.0 {
                // the entering column could not take a positive value; keep it out
                blocked[j] = true;
            }
            if !any_left {
                break;
            }
        }
        blocked.iter_mut().enumerate().for_each(|(i, bl)| {
            if i != j {
                *bl = false;
            }
        });
    }
    let unscaled: Vec<f64> = x.iter().zip(&scales).map(|(v, &s)| if s > 0.0 { v / s } else { 0.0 }).collect();
    let r: Vec<f64> = b.iter().zip(a.mul(&unscaled)).map(|(bi, ai)| bi - ai).collect();
    Ok(NnlsSolution { residual_norm: dot(&r, &r).sqrt(), x: unscaled, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols(rows: &[[f64; 3]]) -> DenseColumns {
        DenseColumns::new(rows.len(), (0..3).map(|j| rows.iter().map(|r| r[j]).collect()).collect()).unwrap()
    }

    #[test]
    fn unconstrained_optimum_inside() {
        let a = cols(&[[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 3.0], [1.0, 1.0, 1.0]]);
        let x_true = [1.0, 2.0, 0.5];
        let b = a.mul(&x_true);
        let s = nnls(&a, &b, 30).unwrap();
        for (x, t) in s.x.iter().zip(x_true) {
            assert!((x - t).abs() < 1e-12);
        }
        assert!(s.residual_norm < 1e-12);
    }

    #[test]
    fn negative_component_clamped() {
        let a = cols(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let s = nnls(&a, &[1.0, -2.0, 3.0], 30).unwrap();
        assert_eq!(s.x, vec![1.0, 0.0, 3.0]);
        assert!((s.residual_norm - 2.0).abs() < 1e-14);
    }

    #[test]
    fn kkt_conditions_hold() {
        let a = cols(&[[1.0, 2.0, 0.5], [0.3, -1.0, 2.0], [2.0, 0.1, -0.4], [-1.0, 1.0, 1.0], [0.5, 0.5, 0.5]]);
        let b = [1.0, -1.0, 2.0, 0.3, -0.2];
        let s = nnls(&a, &b, 30).unwrap();
        let r: Vec<f64> = b.iter().zip(a.mul(&s.x)).map(|(bi, ai)| bi - ai).collect();
        for (j, c) in a.cols.iter().enumerate() {
            let g = dot(c, &r);
            assert!(s.x[j] >= 0.0);
            assert!(g <= 1e-10, "gradient {g} at {j}");
            if s.x[j] > 0.0 {
                assert!(g.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn iteration_cap() {
        let a = cols(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(matches!(nnls(&a, &[1.0, 1.0, 1.0], 2), Err(Error::SolverNotConverged { max_iter: 2 })));
    }
}
