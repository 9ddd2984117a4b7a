//! Pass/fail outcomes of randomized checks and the deterministic trial runner.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::MatrixJson;

/// Tolerance at which a detected failure is re-derived before it is reported.
pub const CERTIFY_TOL: f64 = 1e-12;

/// A reproducible counterexample.
///
/// `matrices` holds the trial inputs followed by the offending difference matrix; the order
/// is documented on each check. Divided-difference checks also record their grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub seed: u64,
    pub trial: u64,
    pub matrices: Vec<MatrixJson>,
    pub lambda_min: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<f64>,
}

/// A passed verdict is evidence; a failed one carries a certified witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub passed: bool,
    pub checks_run: u64,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn pass(checks_run: u64) -> Self {
        Verdict { passed: true, checks_run, witness: None }
    }

    pub fn fail(checks_run: u64, witness: Witness) -> Self {
        Verdict { passed: false, checks_run, witness: Some(witness) }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serialization cannot fail")
    }

    /// Conjunction; the first failure wins and `checks_run` accumulates.
    pub fn and(self, next: impl FnOnce() -> Result<Verdict>) -> Result<Verdict> {
        if !self.passed {
            return Ok(self);
        }
        let v = next()?;
        Ok(Verdict { checks_run: self.checks_run + v.checks_run, ..v })
    }
}

/// RNG for trial `i`: the ChaCha stream `i` of the generator keyed by `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs `trials` independent trials in parallel and reports the lowest-indexed failure.
///
/// Because each trial draws from its own stream and the search returns the first failing
/// index, the verdict does not depend on scheduling.
pub fn run_trials<F>(trials: u64, seed: u64, trial: F) -> Result<Verdict>
where
    F: Fn(u64, &mut ChaCha8Rng) -> Result<Option<Witness>> + Sync,
{
    let first = (0..trials)
        .into_par_iter()
        .map(|i| (i, trial(i, &mut trial_rng(seed, i))))
        .find_first(|(_, r)| !matches!(r, Ok(None)));
    match first {
        None => Ok(Verdict::pass(trials)),
        Some((_, Err(e))) => Err(e),
        Some((i, Ok(Some(w)))) => Ok(Verdict::fail(i + 1, w)),
        Some((_, Ok(None))) => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_independent_and_reproducible() {
        let a: u64 = trial_rng(7, 0).random();
        let b: u64 = trial_rng(7, 1).random();
        assert_ne!(a, b);
        assert_eq!(a, trial_rng(7, 0).random::<u64>());
    }

    #[test]
    fn first_failure_is_reported() {
        let v = run_trials(100, 3, |i, _| {
            Ok((i % 17 == 16).then(|| Witness {
                seed: 3,
                trial: i,
                matrices: vec![],
                lambda_min: -1.0,
                points: None,
                base: None,
            }))
        })
        .unwrap();
        assert!(!v.passed);
        assert_eq!(v.checks_run, 17);
        assert_eq!(v.witness.unwrap().trial, 16);
    }

    #[test]
    fn verdict_json_shape() {
        assert_eq!(Verdict::pass(5).to_json(), r#"{"passed":true,"checks_run":5,"witness":null}"#);
    }
}
