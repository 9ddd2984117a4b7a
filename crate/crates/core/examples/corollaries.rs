//! Monotonicity, concavity, t/f(t) and 1/f on (0, α), reported separately for a few functions.

use loewner::characterizations::{corollary_report, TrialConfig};
use loewner::function::{self, ScalarFunction};
use loewner::Interval;

fn main() -> loewner::Result<()> {
    let cfg = TrialConfig::new(Interval::open(0.0, 10.0)?, 5).with_trials(300);
    let list = [
        function::power(0.5),
        function::power(0.3),
        function::log().renamed("log (negative near 0)"),
        ScalarFunction::new("log(1+t)", Interval::open(-1.0, f64::INFINITY)?, f64::ln_1p).with_d1(|t| 1.0 / (1.0 + t)),
        function::logmean(),
        function::power(2.0),
    ];
    for f in &list {
        match corollary_report(f, &cfg) {
            Ok(r) => println!(
                "{:<22} monotone {:<5} concave {:<5} t/f monotone {:<5} 1/f convex {:<5} => {}",
                f.name(),
                r.monotone.passed,
                r.concave.passed,
                r.t_over_f_monotone.passed,
                r.reciprocal_convex.passed,
                if r.passed() { "consistent with operator monotone" } else { "not operator monotone" }
            ),
            Err(e) => println!("{:<22} skipped: {e}", f.name()),
        }
    }
    Ok(())
}
