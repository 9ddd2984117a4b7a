use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::quadrature::{integrate, QUAD_REL_TOL};
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::linalg::Interval;

/// `φ_t(λ) = t(1 + λ)/(t + λ)`, with `φ_t(0) = 1` and `φ_t(∞) = t`.
pub fn phi(t: f64, lam: f64) -> f64 {
    if lam == f64::INFINITY {
        t
    } else if lam == 0.0 {
        1.0
    } else if t == 0.0 {
        0.0
    } else {
        t * (1.0 + lam) / (t + lam)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub lambda: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Density {
    /// `sin(pπ)/π · λ^{p−1}/(1 + λ) dλ`, which represents `t^p`.
    PowerP { p: f64 },
    /// A pre-discretized density: mass `weights[k]` at `lambdas[k]`.
    CustomNodes { lambdas: Vec<f64>, weights: Vec<f64> },
}

/// A finite positive measure on `[0, ∞]`: masses at 0 and ∞, atoms in `(0, ∞)`, and an
/// optional density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentingMeasure {
    pub atom_zero: f64,
    pub atom_inf: f64,
    pub atoms: Vec<Atom>,
    pub density: Option<Density>,
}

fn check_atom(lambda: f64, weight: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("atom location {lambda} must be positive and finite")));
    }
    if !(weight >= 0.0 && weight.is_finite()) {
        return Err(Error::InvalidArgument(format!("atom weight {weight} must be nonnegative and finite")));
    }
    Ok(())
}

impl RepresentingMeasure {
    pub fn zero() -> Self {
        RepresentingMeasure { atom_zero: 0.0, atom_inf: 0.0, atoms: vec![], density: None }
    }

    /// Unit mass at 0; represents `f = 1`.
    pub fn dirac_zero() -> Self {
        RepresentingMeasure { atom_zero: 1.0, ..Self::zero() }
    }

    /// Unit mass at ∞; represents `f(t) = t`.
    pub fn dirac_inf() -> Self {
        RepresentingMeasure { atom_inf: 1.0, ..Self::zero() }
    }

    /// Mass `weight` at `lambda`, mapped to the matching boundary field for `0` and `∞`.
    pub fn dirac(lambda: f64, weight: f64) -> Result<Self> {
        if lambda == 0.0 {
            Ok(RepresentingMeasure { atom_zero: weight, ..Self::zero() })
        } else if lambda == f64::INFINITY {
            Ok(RepresentingMeasure { atom_inf: weight, ..Self::zero() })
        } else {
            check_atom(lambda, weight)?;
            Ok(RepresentingMeasure { atoms: vec![Atom { lambda, weight }], ..Self::zero() })
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: RepresentingMeasure = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measure serialization cannot fail")
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("atom_zero", self.atom_zero), ("atom_inf", self.atom_inf)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} = {v} must be nonnegative and finite")));
            }
        }
        for a in &self.atoms {
            check_atom(a.lambda, a.weight)?;
        }
        match &self.density {
            None => {}
            Some(Density::PowerP { p }) => {
                if !(*p > 0.0 && *p < 1.0) {
                    return Err(Error::InvalidArgument(format!("power density needs 0 < p < 1, got {p}")));
                }
            }
            Some(Density::CustomNodes { lambdas, weights }) => {
                if lambdas.len() != weights.len() {
                    return Err(Error::InvalidArgument(format!(
                        "custom density has {} nodes but {} weights",
                        lambdas.len(),
                        weights.len()
                    )));
                }
                for (&l, &w) in lambdas.iter().zip(weights) {
                    check_atom(l, w)?;
                }
            }
        }
        Ok(())
    }

    /// `m([0, ∞])`; the density part is integrated numerically.
    pub fn total_mass(&self) -> Result<f64> {
        let atoms: f64 = self.atoms.iter().map(|a| a.weight).sum();
        let density = match &self.density {
            None => 0.0,
            Some(Density::PowerP { p }) => power_density_integral(*p, |l| 1.0 / (1.0 + l), |mu| 1.0 / (1.0 + mu))?,
            Some(Density::CustomNodes { weights, .. }) => weights.iter().sum(),
        };
        Ok(self.atom_zero + self.atom_inf + atoms + density)
    }

    /// Sum of two measures. At most one of them may carry a density.
    pub fn add(&self, other: &RepresentingMeasure) -> Result<RepresentingMeasure> {
        let density = match (&self.density, &other.density) {
            (None, d) | (d, None) => d.clone(),
            (Some(Density::CustomNodes { lambdas: l1, weights: w1 }), Some(Density::CustomNodes { lambdas: l2, weights: w2 })) => {
                Some(Density::CustomNodes { lambdas: [&l1[..], l2].concat(), weights: [&w1[..], w2].concat() })
            }
            _ => return Err(Error::InvalidArgument("cannot add two measures that both carry a power density".into())),
        };
        Ok(RepresentingMeasure {
            atom_zero: self.atom_zero + other.atom_zero,
            atom_inf: self.atom_inf + other.atom_inf,
            atoms: [&self.atoms[..], &other.atoms].concat(),
            density,
        })
    }

    /// `f(t) = a + b·t + ∫ φ_t(λ) dm(λ)`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        eval_measure(self, t)
    }

    /// The represented function on `[0, ∞)`.
    pub fn to_function(&self, name: impl Into<String>) -> ScalarFunction {
        let m = self.clone();
        ScalarFunction::new(name, Interval::nonnegative(), move |t| eval_measure(&m, t).unwrap_or(f64::NAN))
    }
}

/// `∫_0^∞ K(λ) λ^{p−1} dλ` scaled by `sin(pπ)/π`, given `K` on `[0, 1]` and `μ ↦ K(1/μ)/μ`
/// on `(0, 1]`.
///
/// The two halves are mapped by `λ = s^{1/p}` and `λ = w^{−1/(1−p)}`, which turn the
/// algebraic endpoint behaviour into smooth integrands on `[0, 1]`.
pub(crate) fn power_density_integral(
    p: f64,
    k_small: impl Fn(f64) -> f64,
    k_large_inv: impl Fn(f64) -> f64,
) -> Result<f64> {
    let lower = integrate(|s| k_small(s.powf(1.0 / p)) / p, 0.0, 1.0, QUAD_REL_TOL)?;
    let q = 1.0 / (1.0 - p);
    let upper = integrate(|w| q * k_large_inv(w.powf(q)), 0.0, 1.0, QUAD_REL_TOL)?;
    Ok((p * PI).sin() / PI * (lower + upper))
}

/// `a + b·t + Σ wⱼ φ_t(λⱼ) + ∫ φ_t dρ` for `t ≥ 0`.
pub fn eval_measure(m: &RepresentingMeasure, t: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::DomainViolation(format!("t = {t} must be finite and nonnegative")));
    }
    let mut total = m.atom_zero + m.atom_inf * t;
    total += m.atoms.iter().map(|a| a.weight * phi(t, a.lambda)).sum::<f64>();
    match &m.density {
        None => {}
        Some(Density::CustomNodes { lambdas, weights }) => {
            total += lambdas.iter().zip(weights).map(|(&l, w)| w * phi(t, l)).sum::<f64>();
        }
        Some(Density::PowerP { p }) => {
            if t > 0.0 {
                // φ_t(λ)/(1 + λ) = t/(t + λ)
                total += power_density_integral(*p, |l| t / (t + l), |mu| t / (t * mu + 1.0))?;
            }
        }
    }
    Ok(total)
}

/// The measure representing `t^p`, `0 < p < 1`.
pub fn measure_power(p: f64) -> Result<RepresentingMeasure> {
    let m = RepresentingMeasure { density: Some(Density::PowerP { p }), ..RepresentingMeasure::zero() };
    m.validate()?;
    Ok(m)
}
