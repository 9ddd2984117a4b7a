use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::random::{random_contraction, random_hermitian, random_ordered_pair, random_projection};
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::linalg::{
    extreme_eigenvalues, functional_calculus, gram, matrix_power, sqrt, HermitianMatrix, Interval, Matrix, MatrixJson, PSD_TOL,
};
use crate::verdict::{run_trials, Verdict, Witness, CERTIFY_TOL};

pub const DEFAULT_TRIALS: u64 = 500;
pub const DEFAULT_DIM: usize = 6;
pub const DEFAULT_TOL_REL: f64 = 1e-8;
/// Relative eigenvalue uncertainty used by [`MatrixInequality::endpoint_slack`].
pub const ENDPOINT_ROUNDING: f64 = 1e-13;

/// Settings for a randomized matrix check.
///
/// Trial `i` works in dimension `lo + i mod (dim − lo + 1)` with `lo = min(2, dim)`, so the
/// default `dim = 6` cycles through 2..=6 and `dim = 1` gives the scalar case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialConfig {
    pub dim: usize,
    pub trials: u64,
    pub seed: u64,
    pub tol_rel: f64,
    pub interval: Interval,
}

impl TrialConfig {
    pub fn new(interval: Interval, seed: u64) -> Self {
        TrialConfig { dim: DEFAULT_DIM, trials: DEFAULT_TRIALS, seed, tol_rel: DEFAULT_TOL_REL, interval }
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    pub fn with_trials(mut self, trials: u64) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_tol(mut self, tol_rel: f64) -> Self {
        self.tol_rel = tol_rel;
        self
    }

    pub fn with_interval(mut self, interval: Interval) -> Self {
        self.interval = interval;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 1 {
            return Err(Error::InvalidArgument("dim must be at least 1".into()));
        }
        if self.trials < 1 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if !(self.tol_rel > 0.0) {
            return Err(Error::InvalidArgument(format!("tol_rel must be positive, got {}", self.tol_rel)));
        }
        if !self.interval.is_bounded() {
            return Err(Error::InvalidInterval(format!("{} is unbounded; random checks need a bounded interval", self.interval)));
        }
        Ok(())
    }

    pub fn dim_for(&self, trial: u64) -> usize {
        let lo = self.dim.min(2);
        lo + (trial % (self.dim - lo + 1) as u64) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HpVariant {
    /// `f(X*AX) ≤ X*f(A)X` for contractions `X`.
    Iv,
    /// `f(X*AX + Y*BY) ≤ X*f(A)X + Y*f(B)Y` for `X*X + Y*Y ≤ I`.
    V,
    /// `f(PAP) ≤ P f(A) P` for orthogonal projections `P`.
    Vi,
}

impl FromStr for HpVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "iv" => Ok(HpVariant::Iv),
            "v" => Ok(HpVariant::V),
            "vi" => Ok(HpVariant::Vi),
            other => Err(Error::Parse(format!("unknown variant {other:?}; expected iv, v or vi"))),
        }
    }
}

impl fmt::Display for HpVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HpVariant::Iv => "iv",
            HpVariant::V => "v",
            HpVariant::Vi => "vi",
        })
    }
}

/// A matrix inequality `L ≤ R` evaluated on a list of input matrices.
///
/// [`gap`](Self::gap) returns `R − L`; the inequality holds when it is positive semidefinite.
/// Input order, which is also the order of `Witness::matrices` (followed by the gap):
///
/// | variant           | inputs           |
/// |-------------------|------------------|
/// | `LoewnerHeinz`    | `A, B`           |
/// | `Monotone`        | `A, B`           |
/// | `Hp(Iv)`          | `A, X`           |
/// | `Hp(V)`           | `A, B, X, Y`     |
/// | `Hp(Vi)`          | `A, P`           |
/// | `MidpointConcave` | `A, B`           |
/// | `MidpointConvex`  | `A, B`           |
#[derive(Debug, Clone)]
pub enum MatrixInequality {
    /// `B^p ≤ A^p`.
    LoewnerHeinz { p: f64 },
    /// `f(B) ≤ f(A)`.
    Monotone { f: ScalarFunction },
    Hp { variant: HpVariant, f: ScalarFunction, interval: Interval },
    /// `(f(A) + f(B))/2 ≤ f((A + B)/2)`.
    MidpointConcave { f: ScalarFunction },
    /// `f((A + B)/2) ≤ (f(A) + f(B))/2`.
    MidpointConvex { f: ScalarFunction },
}

fn hermitian(m: &Matrix) -> Result<HermitianMatrix> {
    HermitianMatrix::new(m.clone())
}

fn compressed(m: HermitianMatrix, interval: &Interval) -> Result<HermitianMatrix> {
    for l in crate::linalg::eigh(&m, crate::linalg::EIGH_TOL)?.values {
        if interval.admit(l).is_none() {
            return Err(Error::DomainViolation(format!("compressed spectrum escaped {interval}: eigenvalue {l:e}")));
        }
    }
    Ok(m)
}

impl MatrixInequality {
    pub fn arity(&self) -> usize {
        match self {
            MatrixInequality::Hp { variant: HpVariant::V, .. } => 4,
            _ => 2,
        }
    }

    pub fn gap(&self, inputs: &[Matrix]) -> Result<HermitianMatrix> {
        if inputs.len() != self.arity() {
            return Err(Error::InvalidArgument(format!("expected {} input matrices, got {}", self.arity(), inputs.len())));
        }
        match self {
            MatrixInequality::LoewnerHeinz { p } => {
                let (a, b) = (hermitian(&inputs[0])?, hermitian(&inputs[1])?);
                matrix_power(&a, *p)?.sub(&matrix_power(&b, *p)?)
            }
            MatrixInequality::Monotone { f } => {
                let (a, b) = (hermitian(&inputs[0])?, hermitian(&inputs[1])?);
                functional_calculus(f, &a)?.sub(&functional_calculus(f, &b)?)
            }
            MatrixInequality::Hp { variant, f, interval } => {
                let a = hermitian(&inputs[0])?;
                match variant {
                    HpVariant::Iv => hp_iv_gap(f, &a, &inputs[1], interval),
                    HpVariant::V => hp_v_gap(f, &a, &hermitian(&inputs[1])?, &inputs[2], &inputs[3], interval),
                    HpVariant::Vi => hp_vi_gap(f, &a, &hermitian(&inputs[1])?, interval),
                }
            }
            MatrixInequality::MidpointConcave { f } => {
                let (a, b) = (hermitian(&inputs[0])?, hermitian(&inputs[1])?);
                let (mid, avg) = midpoint_terms(f, &a, &b)?;
                mid.sub(&avg)
            }
            MatrixInequality::MidpointConvex { f } => {
                let (a, b) = (hermitian(&inputs[0])?, hermitian(&inputs[1])?);
                let (mid, avg) = midpoint_terms(f, &a, &b)?;
                avg.sub(&mid)
            }
        }
    }

    /// Absolute slack for eigenvalues that sit on a closed lower endpoint of the domain.
    ///
    /// Such eigenvalues are only known to within `δ = ENDPOINT_ROUNDING·max(1, scale)`, and a
    /// function that is not Lipschitz there (`t^p`, `p < 1`, at 0) turns that into an error of
    /// `|f(lo + δ) − f(lo)|` in each term of the gap.
    pub fn endpoint_slack(&self, inputs: &[Matrix]) -> f64 {
        let scale = inputs.iter().map(Matrix::frobenius_norm).fold(1.0, f64::max);
        let delta = ENDPOINT_ROUNDING * scale;
        let jump = |f: &dyn Fn(f64) -> f64, lo: f64| 2.0 * (f(lo + delta) - f(lo)).abs();
        match self {
            MatrixInequality::LoewnerHeinz { p } if *p > 0.0 => jump(&|t: f64| t.powf(*p), 0.0),
            MatrixInequality::LoewnerHeinz { .. } => 0.0,
            MatrixInequality::Monotone { f }
            | MatrixInequality::Hp { f, .. }
            | MatrixInequality::MidpointConcave { f }
            | MatrixInequality::MidpointConvex { f } => {
                let d = f.domain();
                if d.lo_closed() && d.lo().is_finite() {
                    jump(&|t| f.value(t), d.lo())
                } else {
                    0.0
                }
            }
        }
    }

    /// `Some(λ_min)` when the gap violates positivity by more than `tol_rel` plus the endpoint slack.
    pub fn violation(&self, inputs: &[Matrix], tol_rel: f64) -> Result<Option<f64>> {
        let gap = self.gap(inputs)?;
        let (lmin, norm) = extreme_eigenvalues(&gap)?;
        Ok((lmin < -(tol_rel * norm.max(1.0) + self.endpoint_slack(inputs))).then_some(lmin))
    }

    /// Re-evaluates a witness from its stored inputs and tests the gap at [`CERTIFY_TOL`].
    pub fn recheck(&self, w: &Witness) -> Result<bool> {
        let k = self.arity();
        if w.matrices.len() < k {
            return Err(Error::InvalidArgument(format!("witness holds {} matrices, need {k}", w.matrices.len())));
        }
        let inputs = w.matrices[..k].iter().map(Matrix::try_from).collect::<Result<Vec<_>>>()?;
        Ok(self.violation(&inputs, CERTIFY_TOL)?.is_some())
    }

    /// Runs the randomized check: `sample` draws the inputs for a given dimension.
    fn run<S>(&self, cfg: &TrialConfig, sample: S) -> Result<Verdict>
    where
        S: Fn(usize, &mut ChaCha8Rng) -> Result<Vec<Matrix>> + Sync,
    {
        cfg.validate()?;
        run_trials(cfg.trials, cfg.seed, |trial, rng| {
            let inputs = sample(cfg.dim_for(trial), rng)?;
            if self.violation(&inputs, cfg.tol_rel)?.is_none() {
                return Ok(None);
            }
            // certify from the serialized inputs, not the in-memory ones
            let mut matrices: Vec<MatrixJson> = inputs.iter().map(MatrixJson::from).collect();
            let reread = matrices.iter().map(Matrix::try_from).collect::<Result<Vec<_>>>()?;
            let Some(lambda_min) = self.violation(&reread, CERTIFY_TOL)? else { return Ok(None) };
            matrices.push(MatrixJson::from(&self.gap(&reread)?));
            Ok(Some(Witness { seed: cfg.seed, trial, matrices, lambda_min, points: None, base: None }))
        })
    }
}

fn midpoint_terms(f: &ScalarFunction, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let mid = functional_calculus(f, &a.add(b)?.scale(0.5))?;
    let avg = functional_calculus(f, a)?.add(&functional_calculus(f, b)?)?.scale(0.5);
    Ok((mid, avg))
}

/// `X*f(A)X − f(X*AX)`.
pub fn hp_iv_gap(f: &ScalarFunction, a: &HermitianMatrix, x: &Matrix, interval: &Interval) -> Result<HermitianMatrix> {
    let inner = compressed(a.congruence(x)?, interval)?;
    functional_calculus(f, a)?.congruence(x)?.sub(&functional_calculus(f, &inner)?)
}

/// `X*f(A)X + Y*f(B)Y − f(X*AX + Y*BY)`.
pub fn hp_v_gap(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    x: &Matrix,
    y: &Matrix,
    interval: &Interval,
) -> Result<HermitianMatrix> {
    let inner = compressed(a.congruence(x)?.add(&b.congruence(y)?)?, interval)?;
    let outer = functional_calculus(f, a)?.congruence(x)?.add(&functional_calculus(f, b)?.congruence(y)?)?;
    outer.sub(&functional_calculus(f, &inner)?)
}

/// `P f(A) P − f(PAP)`.
pub fn hp_vi_gap(f: &ScalarFunction, a: &HermitianMatrix, p: &HermitianMatrix, interval: &Interval) -> Result<HermitianMatrix> {
    hp_iv_gap(f, a, p.as_matrix(), interval)
}

/// `Y = C·(I − X*X)^{1/2}`, so that `X*X + Y*Y ≤ I` whenever `‖C‖ ≤ 1`.
pub fn complementary_contraction(x: &Matrix, c: &Matrix) -> Result<Matrix> {
    let n = x.dim();
    let defect = HermitianMatrix::identity(n).sub(&gram(x))?;
    Ok(c * sqrt(&defect)?.as_matrix())
}

fn check_ordered_pairs(ineq: MatrixInequality, cfg: &TrialConfig) -> Result<Verdict> {
    let j = cfg.interval;
    ineq.run(cfg, |n, rng| {
        let pair = random_ordered_pair(&j, n, rng)?;
        Ok(vec![pair.a.into_matrix(), pair.b.into_matrix()])
    })
}

fn check_free_pairs(ineq: MatrixInequality, cfg: &TrialConfig) -> Result<Verdict> {
    let j = cfg.interval;
    ineq.run(cfg, |n, rng| Ok(vec![random_hermitian(&j, n, rng)?.into_matrix(), random_hermitian(&j, n, rng)?.into_matrix()]))
}

fn require_domain(f: &ScalarFunction, j: &Interval) -> Result<()> {
    if !j.is_subset_of(f.domain()) {
        return Err(Error::DomainViolation(format!("{j} is not contained in the domain {} of {}", f.domain(), f.name())));
    }
    Ok(())
}

/// Tests `B^p ≤ A^p` on random ordered pairs `B ≤ A` with spectra in `cfg.interval ⊆ [0, ∞)`.
pub fn check_lh(p: f64, cfg: &TrialConfig) -> Result<Verdict> {
    if !p.is_finite() {
        return Err(Error::InvalidArgument(format!("exponent must be finite, got {p}")));
    }
    if cfg.interval.lo() < 0.0 {
        return Err(Error::DomainViolation(format!("{} is not contained in [0, ∞)", cfg.interval)));
    }
    check_ordered_pairs(MatrixInequality::LoewnerHeinz { p }, cfg)
}

/// Tests `f(B) ≤ f(A)` on random ordered pairs `B ≤ A`.
pub fn check_monotone_pairs(f: &ScalarFunction, cfg: &TrialConfig) -> Result<Verdict> {
    require_domain(f, &cfg.interval)?;
    check_ordered_pairs(MatrixInequality::Monotone { f: f.clone() }, cfg)
}

pub fn check_midpoint_concave(f: &ScalarFunction, cfg: &TrialConfig) -> Result<Verdict> {
    require_domain(f, &cfg.interval)?;
    check_free_pairs(MatrixInequality::MidpointConcave { f: f.clone() }, cfg)
}

pub fn check_midpoint_convex(f: &ScalarFunction, cfg: &TrialConfig) -> Result<Verdict> {
    require_domain(f, &cfg.interval)?;
    check_free_pairs(MatrixInequality::MidpointConvex { f: f.clone() }, cfg)
}

/// Compression inequalities on `cfg.interval = [0, α)`.
///
/// Projections have rank `1..n−1` (rank 1 when `n = 1`); for variant `v`, `Y` is built by
/// [`complementary_contraction`] from an independent contraction `C`.
pub fn check_hp(variant: HpVariant, f: &ScalarFunction, cfg: &TrialConfig) -> Result<Verdict> {
    let j = cfg.interval;
    if !(j.lo() == 0.0 && j.lo_closed()) {
        return Err(Error::InvalidInterval(format!("{j} must be of the form [0, α)")));
    }
    require_domain(f, &j)?;
    let ineq = MatrixInequality::Hp { variant, f: f.clone(), interval: j };
    ineq.run(cfg, |n, rng| {
        let a = random_hermitian(&j, n, rng)?;
        Ok(match variant {
            HpVariant::Iv => vec![a.into_matrix(), random_contraction(n, rng)?],
            HpVariant::V => {
                let b = random_hermitian(&j, n, rng)?;
                let x = random_contraction(n, rng)?;
                let c = random_contraction(n, rng)?;
                let y = complementary_contraction(&x, &c)?;
                vec![a.into_matrix(), b.into_matrix(), x, y]
            }
            HpVariant::Vi => {
                let rank = if n == 1 { 1 } else { rng.random_range(1..n) };
                vec![a.into_matrix(), random_projection(n, rank, rng).into_matrix()]
            }
        })
    })
}

/// Outcome of each sub-check of [`check_corollaries`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorollaryReport {
    pub monotone: Verdict,
    pub concave: Verdict,
    pub t_over_f_monotone: Verdict,
    pub reciprocal_convex: Verdict,
}

impl CorollaryReport {
    pub fn passed(&self) -> bool {
        self.verdicts().iter().all(|v| v.passed)
    }

    fn verdicts(&self) -> [&Verdict; 4] {
        [&self.monotone, &self.concave, &self.t_over_f_monotone, &self.reciprocal_convex]
    }

    /// All checks run, with the first failure (in the field order above) as witness.
    pub fn combined(&self) -> Verdict {
        let checks_run = self.verdicts().iter().map(|v| v.checks_run).sum();
        match self.verdicts().into_iter().find(|v| !v.passed) {
            Some(v) => Verdict { checks_run, ..v.clone() },
            None => Verdict::pass(checks_run),
        }
    }
}

/// Runs all four sub-checks on the positive part of `cfg.interval`.
pub fn corollary_report(f: &ScalarFunction, cfg: &TrialConfig) -> Result<CorollaryReport> {
    let j = cfg.interval.positive_part()?;
    let cfg = cfg.with_interval(j);
    let f = f.restricted(j);
    let g = f.clone();
    let t_over_f = ScalarFunction::new(format!("t/{}", f.name()), j, move |t| t / g.value(t));
    let g = f.clone();
    let reciprocal = ScalarFunction::new(format!("1/{}", f.name()), j, move |t| 1.0 / g.value(t));
    Ok(CorollaryReport {
        monotone: check_monotone_pairs(&f, &cfg)?,
        concave: check_midpoint_concave(&f, &cfg)?,
        t_over_f_monotone: check_monotone_pairs(&t_over_f, &cfg)?,
        reciprocal_convex: check_midpoint_convex(&reciprocal, &cfg)?,
    })
}

/// Monotonicity of `f`, midpoint concavity of `f`, monotonicity of `t/f(t)` and midpoint
/// convexity of `1/f`, all on the positive part of `cfg.interval`.
pub fn check_corollaries(f: &ScalarFunction, cfg: &TrialConfig) -> Result<Verdict> {
    Ok(corollary_report(f, cfg)?.combined())
}

/// The fixed pair `A = diag(3/2, 3/4)`, `B = [[1/2, 1/2], [1/2, 1/2]]` with `A ≥ B ≥ 0`.
pub fn tp_pair() -> (HermitianMatrix, HermitianMatrix) {
    let a = HermitianMatrix::from_diag(&[1.5, 0.75]);
    let b = HermitianMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).expect("symmetric");
    (a, b)
}

/// `det(A^p − B^p) = (3/8)^p (3^p − (2^p + 4^p)/2)` for the pair of [`tp_pair`].
pub fn tp_det_closed_form(p: f64) -> f64 {
    0.375f64.powf(p) * (3f64.powf(p) - 0.5 * (2f64.powf(p) + 4f64.powf(p)))
}

#[derive(Debug, Clone)]
pub struct TpCounterexample {
    pub p: f64,
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
    pub difference: HermitianMatrix,
    pub det_closed_form: f64,
    pub det_numeric: f64,
    pub lambda_min: f64,
    /// Whether `B^p ≤ A^p` holds numerically.
    pub order_holds: bool,
}

impl TpCounterexample {
    pub fn det_agrees(&self, tol: f64) -> bool {
        (self.det_closed_form - self.det_numeric).abs() <= tol
    }
}

pub fn counterexample_tp(p: f64) -> Result<TpCounterexample> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!("p must be positive, got {p}")));
    }
    let (a, b) = tp_pair();
    let difference = matrix_power(&a, p)?.sub(&matrix_power(&b, p)?)?;
    let (lambda_min, norm) = extreme_eigenvalues(&difference)?;
    Ok(TpCounterexample {
        p,
        det_closed_form: tp_det_closed_form(p),
        det_numeric: difference.as_matrix().det().re,
        order_holds: lambda_min >= -PSD_TOL * norm.max(1.0),
        lambda_min,
        a,
        b,
        difference,
    })
}
