use serde::Serialize;

use super::measure::{phi, Atom, RepresentingMeasure};
use super::nnls::{nnls, DenseColumns};
use crate::error::{Error, Result};

/// Log-spaced nodes on `[lo, hi]`, both included.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) || count < 1 {
        return Err(Error::InvalidArgument(format!("bad log grid [{lo}, {hi}] with {count} nodes")));
    }
    if count == 1 {
        return Ok(vec![(lo * hi).sqrt()]);
    }
    let (a, b) = (lo.log10(), hi.log10());
    Ok((0..count).map(|k| 10f64.powf(a + (b - a) * k as f64 / (count - 1) as f64)).collect())
}

/// Node grid for fitting: log-spaced on `[t_min/10, t_max·10]` over the positive sample
/// abscissae. With an odd count and `t_min·t_max = 1` the middle node is exactly 1.
pub fn fit_grid(samples: &[(f64, f64)], node_count: usize) -> Result<Vec<f64>> {
    let positive = samples.iter().map(|s| s.0).filter(|&t| t > 0.0);
    let t_min = positive.clone().fold(f64::INFINITY, f64::min);
    let t_max = positive.fold(0.0, f64::max);
    if !(t_min < t_max) {
        return Err(Error::InvalidArgument("samples need at least two distinct positive t values".into()));
    }
    let mut grid = log_grid(t_min / 10.0, t_max * 10.0, node_count)?;
    if node_count % 2 == 1 && ((t_min * t_max).log10()).abs() < 1e-12 {
        grid[node_count / 2] = 1.0;
    }
    Ok(grid)
}

#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub measure: RepresentingMeasure,
    /// Node grid and the fitted weight on each node, zeros included.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub residual_norm: f64,
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    /// `a + b + Σ wⱼ`.
    pub total_mass: f64,
    pub iterations: usize,
}

/// Parses the sample CSV format: header `t,f`, then one `t,f(t)` pair per line.
pub fn parse_samples_csv(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    match lines.next() {
        Some(h) if h.replace(' ', "") == "t,f" => {}
        other => return Err(Error::Parse(format!("expected header \"t,f\", found {other:?}"))),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = || Error::Parse(format!("row {}: expected two numbers, found {line:?}", i + 1));
            let mut parts = line.split(',').map(str::trim);
            let t: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let f: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if parts.next().is_some() || !t.is_finite() || !f.is_finite() {
                return Err(bad());
            }
            Ok((t, f))
        })
        .collect()
}

pub fn samples_to_csv(samples: &[(f64, f64)]) -> String {
    let mut out = String::from("t,f\n");
    for (t, f) in samples {
        out.push_str(&format!("{t:?},{f:?}\n"));
    }
    out
}

fn validate_samples(samples: &[(f64, f64)], node_count: usize) -> Result<()> {
    if samples.len() < node_count + 2 {
        return Err(Error::InvalidArgument(format!(
            "{} samples are too few for {node_count} nodes (need {})",
            samples.len(),
            node_count + 2
        )));
    }
    let mut ts: Vec<f64> = samples.iter().map(|s| s.0).collect();
    if ts.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err(Error::InvalidArgument("sample abscissae must be finite and nonnegative".into()));
    }
    ts.sort_by(f64::total_cmp);
    if ts.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DegeneratePoints("sample abscissae must be distinct".into()));
    }
    Ok(())
}

/// Nonnegative least-squares fit of `a + b·t + Σ wⱼ φ_t(λⱼ)` on the grid of [`fit_grid`].
pub fn fit_discrete_measure(samples: &[(f64, f64)], node_count: usize) -> Result<FitResult> {
    validate_samples(samples, node_count)?;
    let nodes = fit_grid(samples, node_count)?;
    fit_on_nodes(samples, &nodes)
}

/// As [`fit_discrete_measure`] on a caller-supplied node grid.
pub fn fit_on_nodes(samples: &[(f64, f64)], nodes: &[f64]) -> Result<FitResult> {
    validate_samples(samples, nodes.len())?;
    if let Some(l) = nodes.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
        return Err(Error::InvalidArgument(format!("node {l} must be positive and finite")));
    }
    let ts: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let fs: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let mut cols = vec![vec![1.0; ts.len()], ts.clone()];
    cols.extend(nodes.iter().map(|&l| ts.iter().map(|&t| phi(t, l)).collect()));
    let a = DenseColumns::new(ts.len(), cols)?;
    let sol = nnls(&a, &fs, 10 * nodes.len().max(1))?;

    let fitted = a.mul(&sol.x);
    let (mut max_abs, mut max_rel) = (0.0f64, 0.0f64);
    for (f, g) in fs.iter().zip(&fitted) {
        let r = (f - g).abs();
        max_abs = max_abs.max(r);
        max_rel = max_rel.max(r / f.abs().max(f64::MIN_POSITIVE));
    }
    let weights = sol.x[2..].to_vec();
    let measure = RepresentingMeasure {
        atom_zero: sol.x[0],
        atom_inf: sol.x[1],
        atoms: nodes.iter().zip(&weights).filter(|(_, &w)| w > 0.0).map(|(&lambda, &weight)| Atom { lambda, weight }).collect(),
        density: None,
    };
    Ok(FitResult {
        total_mass: sol.x.iter().sum(),
        measure,
        nodes: nodes.to_vec(),
        weights,
        residual_norm: sol.residual_norm,
        max_abs_residual: max_abs,
        max_rel_residual: max_rel,
        iterations: sol.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(f: impl Fn(f64) -> f64, count: usize) -> Vec<(f64, f64)> {
        log_grid(0.01, 100.0, count).unwrap().into_iter().map(|t| (t, f(t))).collect()
    }

    #[test]
    fn grid_contains_one() {
        let g = fit_grid(&samples(|t| t, 10), 31).unwrap();
        assert_eq!(g[15], 1.0);
        assert!((g[0] - 1e-3).abs() < 1e-15 && (g[30] - 1e3).abs() < 1e-9);
    }

    #[test]
    fn constant_is_mass_at_zero() {
        let r = fit_discrete_measure(&samples(|_| 1.0, 100), 21).unwrap();
        assert!((r.measure.atom_zero - 1.0).abs() < 1e-6);
        assert!(r.measure.atom_inf.abs() < 1e-6);
        assert!(r.weights.iter().sum::<f64>() < 1e-6);
    }

    #[test]
    fn single_atom_recovered() {
        let r = fit_discrete_measure(&samples(|t| 2.0 * t / (t + 1.0), 200), 41).unwrap();
        let k = r.nodes.iter().position(|&l| l == 1.0).unwrap();
        assert!((r.weights[k] - 1.0).abs() < 1e-6, "{:?}", r.weights);
        assert!(r.residual_norm < 1e-8);
    }

    #[test]
    fn csv_roundtrip() {
        let s = vec![(0.5, 1.25), (2.0, 3.0)];
        assert_eq!(parse_samples_csv(&samples_to_csv(&s)).unwrap(), s);
        assert!(parse_samples_csv("x,y\n1,2").is_err());
        assert!(parse_samples_csv("t,f\n1").is_err());
        assert!(parse_samples_csv("t,f\n1,2,3").is_err());
    }

    #[test]
    fn bad_samples() {
        assert!(fit_discrete_measure(&samples(|t| t, 5), 10).is_err());
        let dup = vec![(1.0, 1.0); 20];
        assert!(fit_discrete_measure(&dup, 3).is_err());
    }
}
