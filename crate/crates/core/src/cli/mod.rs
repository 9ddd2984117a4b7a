//! The `loewner` command line: `fcalc`, `check` and `rep`.
//!
//! Every command prints one JSON document on stdout and a one-line summary on stderr.
//! Exit codes: 0 success or passed check, 1 certified counterexample, 2 usage or input
//! error, 3 numerical non-convergence.

mod expr;

use std::ffi::OsString;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

pub use expr::{parse_expr, Expr, Func};

use crate::characterizations::{self as ch, HpVariant, TrialConfig};
use crate::divided::{check_n_convex, check_n_monotone, GridCheck};
use crate::error::{Error, Result};
use crate::function::{registry, ScalarFunction};
use crate::integral::{self, RepresentingMeasure};
use crate::linalg::{functional_calculus, parse_hermitian, to_json_string, Interval, MatrixJson, PSD_TOL};
use crate::verdict::Verdict;

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const THREADS_ENV: &str = "LOEWNER_THREADS";

const REGISTRY_NAMES: [&str; 9] = ["identity", "affine", "power", "sqrt", "log", "xlogx", "logmean", "neg_inv", "exp"];
const DEFAULT_GRID_N: usize = 3;
const DEFAULT_GRIDS: u64 = 1000;
const DEFAULT_HI: f64 = 10.0;

#[derive(Debug, Parser)]
#[command(name = "loewner", version, about = "Operator monotonicity and convexity checks, functional calculus and representing measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print f(A) for a Hermitian matrix A given as JSON.
    Fcalc(FcalcArgs),
    /// Run a randomized check and print a report with verdict and witness.
    Check(CheckArgs),
    /// Representing measures: evaluate, fit, power densities, boundary atoms.
    #[command(subcommand)]
    Rep(RepCommand),
}

#[derive(Debug, Args)]
pub struct FcalcArgs {
    /// Matrix JSON file ({"n", "re", "im"}); "-" reads stdin.
    #[arg(long)]
    pub matrix: PathBuf,
    /// Registry name (e.g. "power:2") or an expression in t.
    #[arg(long = "fn")]
    pub function: String,
    /// Domain for expressions, or a restriction of a registry function's domain.
    #[arg(long, allow_hyphen_values = true)]
    pub interval: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Löwner matrices on random n-point grids.
    Monotone,
    /// Kraus matrices on random n-point grids.
    Convex,
    /// f(B) ≤ f(A) on random ordered matrix pairs.
    MonotonePairs,
    HpIv,
    HpV,
    HpVi,
    /// Löwner–Heinz: B^p ≤ A^p on random ordered pairs, plus the fixed 2×2 pair.
    Lh,
    Corollaries,
}

impl CheckKind {
    fn name(self) -> &'static str {
        match self {
            CheckKind::Monotone => "monotone",
            CheckKind::Convex => "convex",
            CheckKind::MonotonePairs => "monotone-pairs",
            CheckKind::HpIv => "hp-iv",
            CheckKind::HpV => "hp-v",
            CheckKind::HpVi => "hp-vi",
            CheckKind::Lh => "lh",
            CheckKind::Corollaries => "corollaries",
        }
    }

    /// Kinds whose interval is `[0, α)`: a bare `0,α` closes the zero endpoint.
    fn closes_zero(self) -> bool {
        matches!(self, CheckKind::HpIv | CheckKind::HpV | CheckKind::HpVi | CheckKind::Lh)
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub kind: CheckKind,
    #[arg(long = "fn")]
    pub function: Option<String>,
    /// "lo,hi" (open) or bracketed, e.g. "[0,10)".
    #[arg(long, allow_hyphen_values = true)]
    pub interval: Option<String>,
    /// Grid size for monotone/convex.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of random grids for monotone/convex.
    #[arg(long)]
    pub grids: Option<u64>,
    /// Number of random trials for matrix checks.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Largest matrix dimension; trials cycle through 2..=dim.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub seed: u64,
    /// Relative PSD tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Exponent for lh.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum RepCommand {
    /// Evaluate the function of a measure at given t, or at every t of a sample file.
    Eval {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        t: Vec<f64>,
        #[arg(long)]
        samples: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit a discrete measure to samples (CSV "t,f").
    Fit {
        #[arg(long)]
        samples: PathBuf,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
        /// Also write the fitted measure JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the measure of t^p by quadrature.
    Power {
        #[arg(long)]
        p: f64,
        #[arg(long, required = true)]
        t: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the boundary masses a = f(0⁺) and b = lim f(t)/t.
    Atoms {
        #[arg(long = "fn")]
        function: String,
        #[arg(long, allow_hyphen_values = true)]
        interval: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Machine-readable result of one invocation.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub config: Value,
    pub result: Value,
    pub version: &'static str,
    pub wall_time_s: f64,
}

struct Outcome {
    config: Value,
    result: Value,
    exit: i32,
    summary: String,
    /// Replaces the report on stdout (fcalc prints the bare matrix).
    raw: Option<String>,
    /// Document written by `--out` when it differs from stdout.
    out_doc: Option<String>,
}

impl Outcome {
    fn new(config: Value, result: Value, exit: i32, summary: String) -> Self {
        Outcome { config, result, exit, summary, raw: None, out_doc: None }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_interval(s: &str, close_zero: bool) -> Result<Interval> {
    let j: Interval = s.parse()?;
    let bare = !s.trim_start().starts_with(['[', '(']);
    if close_zero && bare && j.lo() == 0.0 {
        return Interval::new(0.0, j.hi(), true, j.hi_closed());
    }
    Ok(j)
}

fn is_registry(spec: &str) -> bool {
    let head = spec.trim().split(':').next().unwrap_or("");
    REGISTRY_NAMES.contains(&head) && (spec.contains(':') || !matches!(head, "affine" | "power"))
}

/// Resolves `--fn`: a registry name, or an expression in `t` on `domain` (the real line by
/// default). Expressions get symbolic first and second derivatives.
pub fn resolve_function(spec: &str, domain: Option<&Interval>) -> Result<ScalarFunction> {
    if is_registry(spec) {
        let f = registry(spec)?;
        return match domain {
            Some(d) if d.is_subset_of(f.domain()) => Ok(f.restricted(*d)),
            Some(d) => Err(Error::DomainViolation(format!("{d} is not inside the domain {} of {}", f.domain(), f.name()))),
            None => Ok(f),
        };
    }
    let e = parse_expr(spec)?;
    let d1 = e.derivative();
    let d2 = d1.derivative();
    let domain = domain.copied().unwrap_or_else(Interval::real_line);
    let mid = domain.midpoint();
    let v = e.eval(mid);
    if !v.is_finite() {
        return Err(Error::DomainViolation(format!("{spec:?} evaluates to {v} at t = {mid}, the midpoint of {domain}")));
    }
    let g = e.clone();
    Ok(ScalarFunction::new(spec.trim(), domain, move |t| g.eval(t))
        .with_d1(move |t| d1.eval(t))
        .with_d2(move |t| d2.eval(t)))
}

fn verdict_summary(label: &str, v: &Verdict) -> String {
    match &v.witness {
        None => format!("{label}: passed ({} checks)", v.checks_run),
        Some(w) => format!("{label}: FAILED at trial {} (λ_min = {:e}) after {} checks", w.trial, w.lambda_min, v.checks_run),
    }
}

fn verdict_exit(v: &Verdict) -> i32 {
    if v.passed {
        EXIT_OK
    } else {
        EXIT_COUNTEREXAMPLE
    }
}

fn cmd_fcalc(a: &FcalcArgs) -> Result<Outcome> {
    let m = parse_hermitian(&read_input(&a.matrix)?)?;
    let domain = a.interval.as_deref().map(|s| parse_interval(s, false)).transpose()?;
    let f = resolve_function(&a.function, domain.as_ref())?;
    let fa = functional_calculus(&f, &m)?;
    let text = to_json_string(fa.as_matrix());
    let mut o = Outcome::new(
        json!({"fn": a.function, "n": m.dim()}),
        serde_json::to_value(MatrixJson::from(&fa)).expect("matrix json"),
        EXIT_OK,
        format!("fcalc: applied {} to a {}x{} matrix", f.name(), m.dim(), m.dim()),
    );
    o.raw = Some(text);
    Ok(o)
}

fn cmd_check(a: &CheckArgs) -> Result<Outcome> {
    let kind = a.kind;
    let default_interval = if kind.closes_zero() { Interval::closed_open(0.0, DEFAULT_HI)? } else { Interval::open(0.0, DEFAULT_HI)? };
    let j = match &a.interval {
        Some(s) => parse_interval(s, kind.closes_zero())?,
        None => default_interval,
    };
    let function = |needed: bool| -> Result<Option<ScalarFunction>> {
        match (&a.function, needed) {
            (Some(spec), _) => {
                let f = if is_registry(spec) { resolve_function(spec, None)? } else { resolve_function(spec, Some(&j))? };
                Ok(Some(f))
            }
            (None, true) => Err(Error::InvalidArgument(format!("check {} needs --fn", kind.name()))),
            (None, false) => Ok(None),
        }
    };
    let mut config = json!({
        "kind": kind.name(),
        "fn": a.function,
        "interval": j.to_string(),
        "seed": a.seed,
    });
    let label = format!("check {}", kind.name());
    match kind {
        CheckKind::Monotone | CheckKind::Convex => {
            let f = function(true)?.expect("required");
            let n = a.n.unwrap_or(DEFAULT_GRID_N);
            let grid = GridCheck::new(n, a.grids.unwrap_or(DEFAULT_GRIDS), a.seed).with_tol(a.tol.unwrap_or(PSD_TOL));
            config["n"] = json!(grid.n);
            config["grids"] = json!(grid.grids);
            config["tol"] = json!(grid.tol_rel);
            let v = if kind == CheckKind::Monotone { check_n_monotone(&f, &j, grid)? } else { check_n_convex(&f, &j, grid)? };
            Ok(Outcome::new(config, json!({ "verdict": v }), verdict_exit(&v), verdict_summary(&label, &v)))
        }
        _ => {
            let mut cfg = TrialConfig::new(j, a.seed);
            if let Some(d) = a.dim {
                cfg = cfg.with_dim(d);
            }
            if let Some(t) = a.trials {
                cfg = cfg.with_trials(t);
            }
            if let Some(t) = a.tol {
                cfg = cfg.with_tol(t);
            }
            cfg.validate()?;
            config["dim"] = json!(cfg.dim);
            config["trials"] = json!(cfg.trials);
            config["tol"] = json!(cfg.tol_rel);
            match kind {
                CheckKind::Lh => {
                    let p = a.p.ok_or_else(|| Error::InvalidArgument("check lh needs --p".into()))?;
                    config["p"] = json!(p);
                    let v = ch::check_lh(p, &cfg)?;
                    let mut result = json!({ "verdict": v });
                    let mut exit = verdict_exit(&v);
                    let mut summary = verdict_summary(&label, &v);
                    if p > 0.0 {
                        let r = ch::counterexample_tp(p)?;
                        result["reference"] = json!({
                            "a": MatrixJson::from(&r.a),
                            "b": MatrixJson::from(&r.b),
                            "det_closed_form": r.det_closed_form,
                            "det_numeric": r.det_numeric,
                            "lambda_min": r.lambda_min,
                            "order_holds": r.order_holds,
                        });
                        summary.push_str(&format!(
                            "; fixed pair: det = {:.6} (closed form {:.6}), order {}",
                            r.det_numeric,
                            r.det_closed_form,
                            if r.order_holds { "holds" } else { "FAILS" }
                        ));
                        if !r.order_holds {
                            exit = EXIT_COUNTEREXAMPLE;
                        }
                    }
                    Ok(Outcome::new(config, result, exit, summary))
                }
                CheckKind::Corollaries => {
                    let f = function(true)?.expect("required");
                    let report = ch::corollary_report(&f, &cfg)?;
                    let v = report.combined();
                    Ok(Outcome::new(
                        config,
                        json!({ "verdict": v, "parts": report }),
                        verdict_exit(&v),
                        verdict_summary(&label, &v),
                    ))
                }
                _ => {
                    let f = function(true)?.expect("required");
                    let v = match kind {
                        CheckKind::MonotonePairs => ch::check_monotone_pairs(&f, &cfg)?,
                        CheckKind::HpIv => ch::check_hp(HpVariant::Iv, &f, &cfg)?,
                        CheckKind::HpV => ch::check_hp(HpVariant::V, &f, &cfg)?,
                        CheckKind::HpVi => ch::check_hp(HpVariant::Vi, &f, &cfg)?,
                        _ => unreachable!("handled above"),
                    };
                    Ok(Outcome::new(config, json!({ "verdict": v }), verdict_exit(&v), verdict_summary(&label, &v)))
                }
            }
        }
    }
}

fn cmd_rep(c: &RepCommand) -> Result<Outcome> {
    match c {
        RepCommand::Eval { measure, t, samples, .. } => {
            let m = RepresentingMeasure::from_json(&read_input(measure)?)?;
            let mut points: Vec<(f64, Option<f64>)> = t.iter().map(|&t| (t, None)).collect();
            if let Some(path) = samples {
                points.extend(integral::parse_samples_csv(&read_input(path)?)?.into_iter().map(|(t, f)| (t, Some(f))));
            }
            if points.is_empty() {
                return Err(Error::InvalidArgument("rep eval needs --t or --samples".into()));
            }
            let mut values = Vec::with_capacity(points.len());
            let mut max_dev: Option<f64> = None;
            for (t, given) in points {
                let f = m.eval(t)?;
                let mut entry = json!({ "t": t, "f": f });
                if let Some(g) = given {
                    entry["sample"] = json!(g);
                    max_dev = Some(max_dev.unwrap_or(0.0).max((f - g).abs()));
                }
                values.push(entry);
            }
            let mut result = json!({ "values": values });
            if let Some(d) = max_dev {
                result["max_abs_deviation"] = json!(d);
            }
            let summary = format!("rep eval: {} value(s)", result["values"].as_array().map_or(0, Vec::len));
            Ok(Outcome::new(json!({ "measure": measure.display().to_string() }), result, EXIT_OK, summary))
        }
        RepCommand::Fit { samples, nodes, .. } => {
            let data = integral::parse_samples_csv(&read_input(samples)?)?;
            let fit = integral::fit_discrete_measure(&data, *nodes)?;
            let summary = format!(
                "rep fit: {} samples, {} nodes, residual {:e}, max relative residual {:e}",
                data.len(),
                nodes,
                fit.residual_norm,
                fit.max_rel_residual
            );
            let mut o = Outcome::new(
                json!({ "samples": samples.display().to_string(), "nodes": nodes }),
                serde_json::to_value(&fit).expect("fit json"),
                EXIT_OK,
                summary,
            );
            o.out_doc = Some(fit.measure.to_json());
            Ok(o)
        }
        RepCommand::Power { p, t, .. } => {
            let m = integral::measure_power(*p)?;
            let mut values = Vec::with_capacity(t.len());
            let mut worst = 0.0f64;
            for &t in t {
                let f = m.eval(t)?;
                let exact = t.powf(*p);
                let rel = if exact == 0.0 { f.abs() } else { (f - exact).abs() / exact };
                worst = worst.max(rel);
                values.push(json!({ "t": t, "f": f, "exact": exact, "rel_error": rel }));
            }
            Ok(Outcome::new(
                json!({ "p": p }),
                json!({ "measure": m, "values": values }),
                EXIT_OK,
                format!("rep power: max relative error {worst:e}"),
            ))
        }
        RepCommand::Atoms { function, interval, .. } => {
            let domain = interval.as_deref().map(|s| parse_interval(s, false)).transpose()?;
            let f = resolve_function(function, domain.as_ref())?;
            let r = integral::extract_atoms(&f)?;
            Ok(Outcome::new(
                json!({ "fn": function }),
                serde_json::to_value(r).expect("atoms json"),
                EXIT_OK,
                format!("rep atoms: a = {}, b = {}", r.a, r.b),
            ))
        }
    }
}

fn out_path(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::Fcalc(a) => a.out.as_deref(),
        Command::Check(a) => a.out.as_deref(),
        Command::Rep(r) => match r {
            RepCommand::Eval { out, .. } | RepCommand::Fit { out, .. } | RepCommand::Power { out, .. } | RepCommand::Atoms { out, .. } => {
                out.as_deref()
            }
        },
    }
}

/// Applies `LOEWNER_THREADS` to the global rayon pool. Repeated calls are harmless.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidArgument(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn exit_for(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

/// Runs one invocation; `args` includes the program name. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let start = Instant::now();
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    let outcome = catch_unwind(AssertUnwindSafe(|| match &cli.command {
        Command::Fcalc(a) => cmd_fcalc(a),
        Command::Check(a) => cmd_check(a),
        Command::Rep(r) => cmd_rep(r),
    }));
    let outcome = match outcome {
        Ok(Ok(o)) => o,
        Ok(Err(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_for(&e);
        }
        Err(_) => {
            let _ = writeln!(stderr, "error: internal failure");
            return EXIT_USAGE;
        }
    };
    let report = RunReport {
        command: args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
        config: outcome.config,
        result: outcome.result,
        version: env!("CARGO_PKG_VERSION"),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let text = outcome.raw.unwrap_or_else(|| serde_json::to_string(&report).expect("report serialization cannot fail"));
    if let Some(path) = out_path(&cli.command) {
        let doc = outcome.out_doc.as_deref().unwrap_or(&text);
        if let Err(e) = std::fs::write(path, format!("{doc}\n")) {
            let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    let _ = writeln!(stdout, "{text}");
    let _ = writeln!(stderr, "{}", outcome.summary);
    outcome.exit
}

#[cfg(test)]
mod tests {
    use super::*;

    fn invoke(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("loewner").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn registry_detection() {
        assert!(is_registry("sqrt"));
        assert!(is_registry("power:2"));
        assert!(!is_registry("power"));
        assert!(!is_registry("t^2"));
        assert!(!is_registry("sqrt(t)"));
    }

    #[test]
    fn expression_functions() {
        let j = Interval::open(0.0, 4.0).unwrap();
        let f = resolve_function("t*log(t)", Some(&j)).unwrap();
        assert!((f.eval(std::f64::consts::E).unwrap() - std::f64::consts::E).abs() < 1e-15);
        assert!((f.d1(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(resolve_function("1/t", None).is_err());
        assert!(resolve_function("sqrt:2", None).is_err());
        assert!(resolve_function("log", Some(&Interval::open(-1.0, 1.0).unwrap())).is_err());
    }

    #[test]
    fn zero_closing() {
        assert_eq!(parse_interval("0,10", true).unwrap(), Interval::closed_open(0.0, 10.0).unwrap());
        assert_eq!(parse_interval("0,10", false).unwrap(), Interval::open(0.0, 10.0).unwrap());
        assert_eq!(parse_interval("(0,10)", true).unwrap(), Interval::open(0.0, 10.0).unwrap());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(invoke(&["check", "monotone", "--fn", "sqrt"]).0, EXIT_USAGE);
        assert_eq!(invoke(&["check", "monotone", "--fn", "nope(", "--seed", "1"]).0, EXIT_USAGE);
        assert_eq!(invoke(&["check", "lh", "--seed", "1"]).0, EXIT_USAGE);
        assert_eq!(invoke(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(invoke(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn check_monotone_exit_codes() {
        let (code, out, _) = invoke(&["check", "monotone", "--fn", "sqrt", "--interval", "0.01,100", "--n", "4", "--seed", "7"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains(r#""passed":true"#));
        let (code, out, _) = invoke(&["check", "monotone", "--fn", "power:2", "--interval", "0,10", "--n", "2", "--seed", "7"]);
        assert_eq!(code, EXIT_COUNTEREXAMPLE);
        assert!(out.contains(r#""witness":{"#));
    }

    #[test]
    fn rep_power_and_atoms() {
        let (code, out, _) = invoke(&["rep", "power", "--p", "0.5", "--t", "4"]);
        assert_eq!(code, EXIT_OK);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!((v["result"]["values"][0]["f"].as_f64().unwrap() - 2.0).abs() < 1e-6);
        let (code, out, _) = invoke(&["rep", "atoms", "--fn", "affine:2,1"]);
        assert_eq!(code, EXIT_OK);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!((v["result"]["a"].as_f64().unwrap() - 1.0).abs() < 1e-12);
        assert!((v["result"]["b"].as_f64().unwrap() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn numerical_failure_exit_3() {
        assert_eq!(invoke(&["rep", "atoms", "--fn", "xlogx"]).0, EXIT_NUMERICAL);
    }
}
