//! Real functions of one variable together with their domain and derivatives.
//!
//! Divided differences fall back to `f'` and `f''` when their arguments coalesce, so every
//! function carries either analytic derivatives or a finite-difference step.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::integral::logmean_eval;
use crate::linalg::Interval;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Default relative step for finite-difference first derivatives.
pub const FD_STEP: f64 = 1e-6;
/// Relative rounding error assumed for one evaluation of a function or derivative.
pub const ROUNDING: f64 = 8.0 * f64::EPSILON;

#[derive(Clone)]
pub struct ScalarFunction {
    name: String,
    domain: Interval,
    eval: RealFn,
    d1: Option<RealFn>,
    d2: Option<RealFn>,
    value_error: Option<RealFn>,
    d1_error: Option<RealFn>,
    fd_step: f64,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("d1", &self.d1.is_some())
            .field("d2", &self.d2.is_some())
            .field("value_error", &self.value_error.is_some())
            .field("fd_step", &self.fd_step)
            .finish()
    }
}

impl ScalarFunction {
    pub fn new(name: impl Into<String>, domain: Interval, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ScalarFunction {
            name: name.into(),
            domain,
            eval: Arc::new(eval),
            d1: None,
            d2: None,
            value_error: None,
            d1_error: None,
            fd_step: FD_STEP,
        }
    }

    pub fn with_d1(mut self, d1: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d1 = Some(Arc::new(d1));
        self
    }

    pub fn with_d2(mut self, d2: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d2 = Some(Arc::new(d2));
        self
    }

    /// Absolute error bound for one evaluation, for functions that are themselves computed
    /// by cancellation-prone formulas. The default is `ROUNDING·|f(x)|`.
    pub fn with_value_error(mut self, err: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.value_error = Some(Arc::new(err));
        self
    }

    /// As [`with_value_error`](Self::with_value_error) for the analytic first derivative.
    pub fn with_d1_error(mut self, err: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d1_error = Some(Arc::new(err));
        self
    }

    /// Error bound for the value `y = f(x)`.
    pub fn value_error(&self, x: f64, y: f64) -> f64 {
        match &self.value_error {
            Some(e) => e(x),
            None => ROUNDING * y.abs(),
        }
    }

    pub fn with_fd_step(mut self, step: f64) -> Self {
        self.fd_step = step;
        self
    }

    /// Same function on a smaller (or different) domain.
    pub fn restricted(&self, domain: Interval) -> Self {
        ScalarFunction { domain, ..self.clone() }
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn has_analytic_d1(&self) -> bool {
        self.d1.is_some()
    }

    /// Raw evaluation, no domain check.
    pub fn value(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// Evaluation after the domain margin rule; errors outside the domain or on a non-finite value.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let x = self.admit(x)?;
        let y = (self.eval)(x);
        if !y.is_finite() {
            return Err(Error::NonFinite(format!("{}({x}) = {y}", self.name)));
        }
        Ok(y)
    }

    pub fn admit(&self, x: f64) -> Result<f64> {
        self.domain
            .admit(x)
            .ok_or_else(|| Error::DomainViolation(format!("{x} is outside the domain {} of {}", self.domain, self.name)))
    }

    pub fn d1(&self, x: f64) -> Result<f64> {
        Ok(self.d1_with_error(x)?.0)
    }

    pub fn d2(&self, x: f64) -> Result<f64> {
        Ok(self.d2_with_error(x)?.0)
    }

    /// `f'(x)` and a bound on its absolute error: rounding only for an analytic derivative,
    /// rounding of the difference stencil otherwise.
    pub fn d1_with_error(&self, x: f64) -> Result<(f64, f64)> {
        let x = self.admit(x)?;
        let (y, err) = match &self.d1 {
            Some(d) => {
                let y = d(x);
                (y, self.d1_error.as_ref().map_or(ROUNDING * y.abs(), |e| e(x)))
            }
            None => self.fd_first(x),
        };
        Ok((finite(y, || format!("{}'({x})", self.name))?, err))
    }

    /// `f''(x)` and a bound on its absolute error, including an extrapolation estimate of
    /// the truncation error for finite differences.
    pub fn d2_with_error(&self, x: f64) -> Result<(f64, f64)> {
        let x = self.admit(x)?;
        let (y, err) = match &self.d2 {
            Some(d) => {
                let y = d(x);
                (y, ROUNDING * y.abs())
            }
            None => self.fd_second(x),
        };
        Ok((finite(y, || format!("{}''({x})", self.name))?, err))
    }

    /// Largest step `≤ h` such that the points `x + k·h·dir`, `k = 1..=reach`, stay in the domain.
    fn room(&self, x: f64, h: f64, dir: f64, reach: f64) -> f64 {
        let mut step = h;
        for _ in 0..60 {
            if self.domain.contains(x + dir * reach * step) {
                return step;
            }
            step *= 0.5;
        }
        0.0
    }

    /// `Σ c·f(x + k·h) / den` over `taps = [(k, c)]`, with its rounding bound.
    fn stencil(&self, x: f64, h: f64, taps: &[(f64, f64)], den: f64) -> (f64, f64) {
        let (mut v, mut e) = (0.0, 0.0);
        for &(k, c) in taps {
            let at = x + k * h;
            let y = (self.eval)(at);
            v += c * y;
            e += c.abs() * self.value_error(at, y);
        }
        (v / den, e / den.abs())
    }

    fn fd_first(&self, x: f64) -> (f64, f64) {
        let h = self.fd_step * x.abs().max(1.0);
        let central = self.room(x, h, 1.0, 1.0).min(self.room(x, h, -1.0, 1.0));
        if central >= 1e-3 * h {
            return self.stencil(x, central, &[(1.0, 1.0), (-1.0, -1.0)], 2.0 * central);
        }
        let fwd = self.room(x, h, 1.0, 2.0);
        let bwd = self.room(x, h, -1.0, 2.0);
        let (h, s) = if fwd >= bwd { (fwd, 1.0) } else { (bwd, -1.0) };
        self.stencil(x, s * h, &[(0.0, -3.0), (1.0, 4.0), (2.0, -1.0)], 2.0 * s * h)
    }

    fn fd_second(&self, x: f64) -> (f64, f64) {
        const CENTRAL: [(f64, f64); 5] = [(-2.0, -1.0), (-1.0, 16.0), (0.0, -30.0), (1.0, 16.0), (2.0, -1.0)];
        const ONE_SIDED: [(f64, f64); 5] = [(0.0, 35.0), (1.0, -104.0), (2.0, 114.0), (3.0, -56.0), (4.0, 11.0)];
        let scale = x.abs().max(1.0);
        // fourth-order stencil: the step balances ε/h² against h⁴
        let h = self.fd_step.powf(0.4) * scale;
        let central = self.room(x, h, 1.0, 2.0).min(self.room(x, h, -1.0, 2.0));
        if central >= 1e-2 * h {
            let (coarse, _) = self.stencil(x, central, &CENTRAL, 12.0 * central * central);
            let half = 0.5 * central;
            let (fine, rounding) = self.stencil(x, half, &CENTRAL, 12.0 * half * half);
            return (fine, rounding + (fine - coarse).abs() / 15.0);
        }
        let h = self.fd_step.sqrt() * scale;
        let fwd = self.room(x, h, 1.0, 4.0);
        let bwd = self.room(x, h, -1.0, 4.0);
        let (h, s) = if fwd >= bwd { (fwd, 1.0) } else { (bwd, -1.0) };
        let (coarse, _) = self.stencil(x, s * h, &ONE_SIDED, 12.0 * h * h);
        let (fine, rounding) = self.stencil(x, 0.5 * s * h, &ONE_SIDED, 3.0 * h * h);
        (fine, rounding + (fine - coarse).abs() / 3.0)
    }
}

fn finite(y: f64, what: impl FnOnce() -> String) -> Result<f64> {
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::NonFinite(format!("{} = {y}", what())))
    }
}

fn parse_num(s: &str, what: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad {what} parameter {s:?}")))
}

/// Functions addressable by name: `identity`, `affine:m,c`, `power:p`, `sqrt`, `log`,
/// `xlogx`, `logmean`, `neg_inv`, `exp`.
pub fn registry(spec: &str) -> Result<ScalarFunction> {
    let spec = spec.trim();
    let (head, args) = match spec.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (spec, None),
    };
    let f = match (head, args) {
        ("identity", None) => identity(),
        ("affine", Some(a)) => {
            let (m, c) = a.split_once(',').ok_or_else(|| Error::Parse("affine needs m,c".into()))?;
            affine(parse_num(m, "slope")?, parse_num(c, "intercept")?)
        }
        ("power", Some(p)) => power(parse_num(p, "exponent")?),
        ("sqrt", None) => power(0.5).renamed("sqrt"),
        ("log", None) => log(),
        ("xlogx", None) => xlogx(),
        ("logmean", None) => logmean(),
        ("neg_inv", None) => neg_inv(),
        ("exp", None) => exp(),
        _ => return Err(Error::Parse(format!("unknown function {spec:?}"))),
    };
    Ok(f.renamed(spec))
}

pub fn identity() -> ScalarFunction {
    ScalarFunction::new("identity", Interval::real_line(), |t| t).with_d1(|_| 1.0).with_d2(|_| 0.0)
}

pub fn affine(m: f64, c: f64) -> ScalarFunction {
    ScalarFunction::new(format!("affine:{m},{c}"), Interval::real_line(), move |t| m * t + c)
        .with_d1(move |_| m)
        .with_d2(|_| 0.0)
}

/// `t^p`. Nonnegative integer powers live on ℝ, other positive powers on `[0, ∞)`,
/// negative powers on `(0, ∞)`.
pub fn power(p: f64) -> ScalarFunction {
    let domain = if p >= 0.0 && p.fract() == 0.0 {
        Interval::real_line()
    } else if p > 0.0 {
        Interval::nonnegative()
    } else {
        Interval::positive()
    };
    let int_pow = p.fract() == 0.0 && p.abs() < 64.0;
    let pw = move |t: f64, e: f64| -> f64 {
        if e == 0.0 {
            1.0
        } else if int_pow && (e.fract() == 0.0) {
            t.powi(e as i32)
        } else {
            t.powf(e)
        }
    };
    ScalarFunction::new(format!("power:{p}"), domain, move |t| pw(t, p))
        .with_d1(move |t| if p == 0.0 { 0.0 } else { p * pw(t, p - 1.0) })
        .with_d2(move |t| if p == 0.0 || p == 1.0 { 0.0 } else { p * (p - 1.0) * pw(t, p - 2.0) })
}

pub fn log() -> ScalarFunction {
    ScalarFunction::new("log", Interval::positive(), f64::ln).with_d1(|t| 1.0 / t).with_d2(|t| -1.0 / (t * t))
}

/// `t log t` with the continuous value 0 at 0.
pub fn xlogx() -> ScalarFunction {
    ScalarFunction::new("xlogx", Interval::nonnegative(), |t| if t == 0.0 { 0.0 } else { t * t.ln() })
        .with_d1(|t| t.ln() + 1.0)
        .with_d2(|t| 1.0 / t)
}

/// `(t − 1)/log t` with `f(0) = 0` and `f(1) = 1`.
pub fn logmean() -> ScalarFunction {
    ScalarFunction::new("logmean", Interval::nonnegative(), logmean_eval)
}

/// `−1/t` on `(0, ∞)`.
pub fn neg_inv() -> ScalarFunction {
    ScalarFunction::new("neg_inv", Interval::positive(), |t| -1.0 / t)
        .with_d1(|t| 1.0 / (t * t))
        .with_d2(|t| -2.0 / (t * t * t))
}

/// `1/t` on `(0, ∞)`.
pub fn inv() -> ScalarFunction {
    ScalarFunction::new("inv", Interval::positive(), |t| 1.0 / t)
        .with_d1(|t| -1.0 / (t * t))
        .with_d2(|t| 2.0 / (t * t * t))
}

pub fn exp() -> ScalarFunction {
    ScalarFunction::new("exp", Interval::real_line(), f64::exp).with_d1(f64::exp).with_d2(f64::exp)
}
