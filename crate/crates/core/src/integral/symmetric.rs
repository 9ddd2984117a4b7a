use serde::{Deserialize, Serialize};

use super::measure::{Atom, RepresentingMeasure};
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::linalg::Interval;
use crate::verdict::{Verdict, Witness};

const MASS_TOL: f64 = 1e-10;
pub const K_GRID: usize = 1000;
/// Relative slack allowed on the two rational bounds.
pub const K_BOUND_TOL: f64 = 1e-10;
const SECOND_DIFF_STEP: f64 = 1e-4;
const SECOND_DIFF_TOL: f64 = 1e-6;

/// `ψ(x) = (1 + x)/(1 − x)`, a bijection `(−1, 1) → (0, ∞)`.
pub fn mobius(x: f64) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(Error::DomainViolation(format!("mobius needs |x| < 1, got {x}")));
    }
    Ok((1.0 + x) / (1.0 - x))
}

/// `ψ⁻¹(t) = (t − 1)/(t + 1)`.
pub fn mobius_inv(t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::DomainViolation(format!("inverse mobius needs 0 < t < ∞, got {t}")));
    }
    Ok((t - 1.0) / (t + 1.0))
}

/// `f(x) = f(0) + f'(0) ∫ x/(1 − λx) dμ(λ)` with `μ` a probability measure on `[−1, 1]`.
///
/// Discretized densities are stored as further atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricMeasure {
    pub f0: f64,
    pub fprime0: f64,
    pub mu: Vec<Atom>,
}

impl SymmetricMeasure {
    pub fn new(f0: f64, fprime0: f64, mu: Vec<Atom>) -> Result<Self> {
        let s = SymmetricMeasure { f0, fprime0, mu };
        s.validate()?;
        Ok(s)
    }

    /// Extreme point: `μ = δ_λ`.
    pub fn extreme(lambda: f64) -> Result<Self> {
        Self::new(0.0, 1.0, vec![Atom { lambda, weight: 1.0 }])
    }

    pub fn validate(&self) -> Result<()> {
        if !self.f0.is_finite() {
            return Err(Error::NonFinite(format!("f0 = {}", self.f0)));
        }
        if !(self.fprime0 > 0.0 && self.fprime0.is_finite()) {
            return Err(Error::InvalidArgument(format!("f'(0) = {} must be positive", self.fprime0)));
        }
        for a in &self.mu {
            if !(a.lambda.abs() <= 1.0) || !(a.weight >= 0.0 && a.weight.is_finite()) {
                return Err(Error::InvalidArgument(format!("atom ({}, {}) is not in [−1, 1] with nonnegative weight", a.lambda, a.weight)));
            }
        }
        let mass: f64 = self.mu.iter().map(|a| a.weight).sum();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidArgument(format!("μ must have total mass 1, got {mass}")));
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        eval_symmetric(self, x)
    }

    /// The measure on `[0, ∞]` representing `t ↦ g(ψ⁻¹(t))`.
    ///
    /// An atom at `λ ∈ (−1, 1)` moves to `ψ(λ)` with weight `f'(0)μ/(1 + λ)`; mass at `λ = 1`
    /// becomes `f'(0)μ/2` at ∞; the constant term collects `f(0) − f'(0) Σ μ/(1 + λ)`.
    /// Mass at `λ = −1` makes the function unbounded near `t = 0` and is rejected, as is a
    /// negative constant term.
    pub fn to_half_line(&self) -> Result<RepresentingMeasure> {
        self.validate()?;
        let mut m = RepresentingMeasure::zero();
        let mut constant = self.f0;
        for a in self.mu.iter().filter(|a| a.weight > 0.0) {
            if a.lambda == -1.0 {
                return Err(Error::DomainViolation("mass at λ = −1 is unbounded below at t = 0".into()));
            }
            let w = self.fprime0 * a.weight / (1.0 + a.lambda);
            constant -= w;
            if a.lambda == 1.0 {
                m.atom_inf += w;
            } else {
                m.atoms.push(Atom { lambda: mobius(a.lambda)?, weight: w });
            }
        }
        if constant < -1e-12 * self.f0.abs().max(1.0) {
            return Err(Error::DomainViolation(format!("f(0⁺) = {constant:e} is negative")));
        }
        m.atom_zero = constant.max(0.0);
        Ok(m)
    }
}

pub fn eval_symmetric(s: &SymmetricMeasure, x: f64) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(Error::DomainViolation(format!("x = {x} must satisfy |x| < 1")));
    }
    let integral: f64 = s.mu.iter().map(|a| a.weight * x / (1.0 - a.lambda * x)).sum();
    Ok(s.f0 + s.fprime0 * integral)
}

/// `x ↦ x/(1 − λx)` on `(−1, 1)`, the extreme points of the normalized class.
pub fn extreme_point(lambda: f64) -> ScalarFunction {
    ScalarFunction::new(format!("x/(1-{lambda}x)"), Interval::open(-1.0, 1.0).expect("valid"), move |x| x / (1.0 - lambda * x))
        .with_d1(move |x| 1.0 / (1.0 - lambda * x).powi(2))
        .with_d2(move |x| 2.0 * lambda / (1.0 - lambda * x).powi(3))
}

/// Outcome of [`check_k_bounds`]. Gaps are relative to `max(1, |bound|)`; a negative gap is
/// a violation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KBoundsReport {
    pub passed: bool,
    /// Smallest and largest of `(x/(1−x) − g(x))` over the grid on `[0, 1)`.
    pub upper_gap_min: f64,
    pub upper_gap_max: f64,
    /// Smallest and largest of `(g(x) − x/(1+x))` over the grid on `(−1, 0]`.
    pub lower_gap_min: f64,
    pub lower_gap_max: f64,
    /// Central second difference of `g` at 0.
    pub second_derivative: f64,
    /// Grid point of the worst violation, if any.
    pub worst_point: Option<f64>,
}

impl KBoundsReport {
    /// Whether `g(x) = x/(1−x)` on the whole grid to `tol`.
    pub fn upper_attained(&self, tol: f64) -> bool {
        self.upper_gap_max.abs() <= tol && self.upper_gap_min.abs() <= tol
    }

    pub fn verdict(&self) -> Verdict {
        let checks = 2 * K_GRID as u64 + 1;
        match self.worst_point {
            None if self.passed => Verdict::pass(checks),
            _ => Verdict::fail(
                checks,
                Witness {
                    seed: 0,
                    trial: 0,
                    matrices: vec![],
                    lambda_min: self.upper_gap_min.min(self.lower_gap_min),
                    points: self.worst_point.map(|x| vec![x]),
                    base: None,
                },
            ),
        }
    }
}

/// Checks `x/(1+x) ≤ g(x) ≤ x/(1−x)` on `K_GRID` points of each half of `(−1, 1)` and
/// `|g''(0)| ≤ 2`, where `g = (f − f(0))/f'(0)`.
pub fn check_k_bounds(f: &ScalarFunction) -> Result<KBoundsReport> {
    let unit = Interval::open(-1.0, 1.0)?;
    if !unit.is_subset_of(f.domain()) {
        return Err(Error::DomainViolation(format!("{} is not defined on (−1, 1)", f.name())));
    }
    let f0 = f.eval(0.0)?;
    let d0 = f.d1(0.0)?;
    if !(d0 > 0.0) {
        return Err(Error::DomainViolation(format!("f'(0) = {d0} must be positive to normalize")));
    }
    let g = |x: f64| -> Result<f64> { Ok((f.eval(x)? - f0) / d0) };
    let rel = |gap: f64, bound: f64| gap / bound.abs().max(1.0);

    let mut worst: Option<(f64, f64)> = None;
    let mut note = |x: f64, gap: f64| {
        if gap < -K_BOUND_TOL && worst.is_none_or(|(_, w)| gap < w) {
            worst = Some((x, gap));
        }
    };
    let (mut upper_min, mut upper_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut lower_min, mut lower_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..K_GRID {
        let x = k as f64 / K_GRID as f64;
        let bound = x / (1.0 - x);
        let gap = rel(bound - g(x)?, bound);
        upper_min = upper_min.min(gap);
        upper_max = upper_max.max(gap);
        note(x, gap);

        let x = -x;
        let bound = x / (1.0 + x);
        let gap = rel(g(x)? - bound, bound);
        lower_min = lower_min.min(gap);
        lower_max = lower_max.max(gap);
        note(x, gap);
    }
    let h = SECOND_DIFF_STEP;
    let second = (g(h)? - 2.0 * g(0.0)? + g(-h)?) / (h * h);
    let second_ok = second.abs() <= 2.0 + SECOND_DIFF_TOL;
    if !second_ok && worst.is_none() {
        worst = Some((0.0, 2.0 - second.abs()));
    }
    Ok(KBoundsReport {
        passed: worst.is_none(),
        upper_gap_min: upper_min,
        upper_gap_max: upper_max,
        lower_gap_min: lower_min,
        lower_gap_max: lower_max,
        second_derivative: second,
        worst_point: worst.map(|(x, _)| x),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function;

    #[test]
    fn mobius_values() {
        assert_eq!(mobius(0.0).unwrap(), 1.0);
        assert_eq!(mobius_inv(1.0).unwrap(), 0.0);
        assert!((mobius(1.0 / 3.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(mobius(1.0).is_err() && mobius(-1.5).is_err());
        assert!(mobius_inv(0.0).is_err());
    }

    #[test]
    fn symmetric_examples() {
        let s = SymmetricMeasure::new(
            0.0,
            1.0,
            vec![Atom { lambda: -1.0, weight: 0.5 }, Atom { lambda: 1.0, weight: 0.5 }],
        )
        .unwrap();
        assert!((s.eval(0.5).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.eval(0.0).unwrap(), 0.0);
        assert!(s.eval(1.0).is_err());
        assert!(SymmetricMeasure::new(0.0, 1.0, vec![Atom { lambda: 0.0, weight: 0.5 }]).is_err());
        assert!(SymmetricMeasure::new(0.0, 0.0, vec![Atom { lambda: 0.0, weight: 1.0 }]).is_err());
    }

    #[test]
    fn half_line_conversion_matches_composition() {
        let s = SymmetricMeasure::new(
            2.0,
            0.7,
            vec![
                Atom { lambda: -0.5, weight: 0.2 },
                Atom { lambda: 0.0, weight: 0.3 },
                Atom { lambda: 0.8, weight: 0.4 },
                Atom { lambda: 1.0, weight: 0.1 },
            ],
        )
        .unwrap();
        let m = s.to_half_line().unwrap();
        m.validate().unwrap();
        for t in [0.0, 0.1, 1.0, 3.0, 50.0] {
            let direct = if t == 0.0 { s.eval(-1.0 + 1e-15).unwrap() } else { s.eval(mobius_inv(t).unwrap()).unwrap() };
            assert!((m.eval(t).unwrap() - direct).abs() < 1e-10 * direct.abs().max(1.0), "t={t}");
        }
    }

    #[test]
    fn half_line_rejections() {
        assert!(SymmetricMeasure::extreme(-1.0).unwrap().to_half_line().is_err());
        // f0 = 0 with f'(0) μ/(1+λ) > 0 leaves a negative constant
        assert!(SymmetricMeasure::extreme(0.0).unwrap().to_half_line().is_err());
    }

    #[test]
    fn k_bounds_examples() {
        let r = check_k_bounds(&function::identity()).unwrap();
        assert!(r.passed);
        assert!(r.upper_gap_min == 0.0 && r.upper_gap_max > 0.0);
        let r = check_k_bounds(&extreme_point(1.0)).unwrap();
        assert!(r.passed && r.upper_attained(1e-12));
        let r = check_k_bounds(&extreme_point(-0.5)).unwrap();
        assert!(r.passed);
        assert!((r.second_derivative + 1.0).abs() < 1e-6);
    }

    #[test]
    fn k_bounds_reject_square() {
        let f = ScalarFunction::new("x+x^2", Interval::real_line(), |x| x + 2.0 * x * x);
        let r = check_k_bounds(&f).unwrap();
        assert!(!r.passed);
        assert!(!r.verdict().passed);
    }
}
