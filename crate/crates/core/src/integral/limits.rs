use serde::Serialize;

use super::quadrature::gauss_legendre;
use crate::error::{Error, Result};
use crate::function::ScalarFunction;

const K_FIRST: i32 = 10;
const K_LAST: i32 = 40;
pub const LIMIT_TOL: f64 = 1e-8;

/// Boundary masses `a = f(0⁺)` and `b = lim f(t)/t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryAtoms {
    pub a: f64,
    pub b: f64,
}

/// Limit of a sequence sampled on a geometric grid.
///
/// Each term is also passed through Aitken's Δ² transform, which removes a geometric error
/// term such as the `2^{−k/2}` of `√t/t`. The first index at which either the raw or the
/// accelerated sequence changes by less than `LIMIT_TOL·max(1, |value|)` gives the result.
fn stabilized_limit(seq: &[f64], what: &str) -> Result<f64> {
    let close = |x: f64, y: f64| (x - y).abs() < LIMIT_TOL * x.abs().max(1.0);
    let aitken = |k: usize| {
        let (s0, s1, s2) = (seq[k - 2], seq[k - 1], seq[k]);
        let denom = s2 - 2.0 * s1 + s0;
        let accel = s2 - (s2 - s1).powi(2) / denom;
        if denom != 0.0 && accel.is_finite() {
            accel
        } else {
            s2
        }
    };
    let mut prev_accel: Option<f64> = None;
    for k in 1..seq.len() {
        if !seq[k].is_finite() {
            break;
        }
        if close(seq[k], seq[k - 1]) {
            return Ok(seq[k]);
        }
        if k >= 2 {
            let acc = aitken(k);
            if let Some(p) = prev_accel {
                if close(acc, p) {
                    return Ok(acc);
                }
            }
            prev_accel = Some(acc);
        }
    }
    Err(Error::LimitNotConverged(format!("{what} did not stabilize over 2^{K_FIRST}..2^{K_LAST}")))
}

/// `a = f(0)` (or the limit along `t = 2^{−k}` when 0 is outside the domain) and
/// `b = lim_{t→∞} f(t)/t` along `t = 2^k`, `k = 10..40`.
pub fn extract_atoms(f: &ScalarFunction) -> Result<BoundaryAtoms> {
    let a = if f.domain().contains(0.0) {
        f.eval(0.0)?
    } else {
        let seq = (K_FIRST..=K_LAST).map(|k| f.eval(2f64.powi(-k))).collect::<Result<Vec<_>>>()?;
        stabilized_limit(&seq, &format!("{}(0⁺)", f.name()))?
    };
    let seq = (K_FIRST..=K_LAST)
        .map(|k| {
            let t = 2f64.powi(k);
            Ok(f.eval(t)? / t)
        })
        .collect::<Result<Vec<_>>>()?;
    let b = stabilized_limit(&seq, &format!("{}(t)/t", f.name()))?;
    Ok(BoundaryAtoms { a, b })
}

/// Logarithmic mean against 1: `(t − 1)/log t = ∫_0^1 t^x dx`, with the values 0 at `t = 0`
/// and 1 at `t = 1`.
pub fn logmean_eval(t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let u = t - 1.0;
    if u == 0.0 {
        1.0
    } else {
        u / u.ln_1p()
    }
}

/// `∫_0^1 t^x dx` by an `n`-point Gauss–Legendre rule; an independent route to [`logmean_eval`].
pub fn logmean_quadrature(t: f64, n: usize) -> f64 {
    let (x, w) = gauss_legendre(n);
    0.5 * x.iter().zip(&w).map(|(x, w)| w * t.powf(0.5 * (x + 1.0))).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function;

    #[test]
    fn atoms_of_simple_functions() {
        let r = extract_atoms(&function::affine(2.0, 1.0)).unwrap();
        assert!((r.a - 1.0).abs() < 1e-12 && (r.b - 2.0).abs() < 1e-8);
        let r = extract_atoms(&function::power(0.5)).unwrap();
        assert!(r.a.abs() < 1e-12 && r.b.abs() < 1e-8);
        let r = extract_atoms(&function::identity()).unwrap();
        assert!(r.a.abs() < 1e-12 && (r.b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn open_zero_extrapolates() {
        let f = function::power(0.5).restricted(crate::linalg::Interval::positive());
        let r = extract_atoms(&f).unwrap();
        assert!(r.a.abs() < 1e-8 && r.b.abs() < 1e-8);
        // (t − 1)/log t approaches 0 only like 1/log t
        let f = function::logmean().restricted(crate::linalg::Interval::positive());
        assert!(matches!(extract_atoms(&f), Err(Error::LimitNotConverged(_))));
    }

    #[test]
    fn divergent_limit_reported() {
        let r = extract_atoms(&function::xlogx());
        assert!(matches!(r, Err(Error::LimitNotConverged(_))));
    }

    #[test]
    fn logmean_values() {
        assert_eq!(logmean_eval(1.0), 1.0);
        assert_eq!(logmean_eval(0.0), 0.0);
        assert!((logmean_eval(std::f64::consts::E) - (std::f64::consts::E - 1.0)).abs() < 1e-15);
        for t in [1e-3, 0.5, 1.0 + 1e-9, 2.0, 30.0] {
            assert!((logmean_eval(t) - logmean_quadrature(t, 32)).abs() < 1e-10, "t={t}");
        }
    }
}
