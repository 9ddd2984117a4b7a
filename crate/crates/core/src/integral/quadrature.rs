use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const GL_ORDER: usize = 64;
/// Relative change between successive dyadic refinements at which integration stops.
pub const QUAD_REL_TOL: f64 = 1e-8;
const MAX_LEVEL: u32 = 14;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss–Legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // P_n(x) and P_n'(x) by the three-term recurrence
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// Composite 64-point Gauss–Legendre sum over `panels` equal panels of `[a, b]`.
pub fn composite(f: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (nodes, weights) = rule();
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let lo = a + k as f64 * h;
        let mid = lo + 0.5 * h;
        let s: f64 = nodes.iter().zip(weights).map(|(x, w)| w * f(mid + 0.5 * h * x)).sum();
        total += 0.5 * h * s;
    }
    total
}

/// `∫_a^b f` by composite Gauss–Legendre, doubling the panel count until the relative change
/// drops below `rel_tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let mut prev = composite(&f, a, b, 1);
    let mut change = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        let cur = composite(&f, a, b, 1 << level);
        if !cur.is_finite() {
            return Err(Error::NonFinite(format!("quadrature produced {cur}")));
        }
        change = (cur - prev).abs();
        if change <= rel_tol * cur.abs() || change == 0.0 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureFailure { tol: rel_tol, last_change: change / prev.abs().max(f64::MIN_POSITIVE) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // degree 15 is the limit for 8 points
        let i: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((i - 2.0 / 15.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn order_64_weights() {
        let (x, w) = rule();
        assert_eq!(x.len(), 64);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
        assert!(x.iter().zip(x.iter().rev()).all(|(a, b)| (a + b).abs() < 1e-15));
    }

    #[test]
    fn smooth_integrals() {
        let v = integrate(f64::exp, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-14);
        let v = integrate(|x| 1.0 / (1.0 + x * x), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - std::f64::consts::FRAC_PI_4).abs() < 1e-14);
    }

    #[test]
    fn endpoint_singularity_does_not_converge() {
        let r = integrate(|x: f64| x.powf(-0.999), 0.0, 1.0, 1e-12);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }
}
