//! Compression inequalities on [0, α): f(X*AX) ≤ X*f(A)X for contractions, the two-term form
//! with X*X + Y*Y ≤ I, and f(PAP) ≤ P f(A) P for projections.

use loewner::characterizations::{check_hp, HpVariant, TrialConfig};
use loewner::function::{self, ScalarFunction};
use loewner::Interval;

fn main() -> loewner::Result<()> {
    let j = Interval::closed_open(0.0, 10.0)?;
    let cfg = TrialConfig::new(j, 11).with_trials(500);
    let candidates: Vec<(&str, ScalarFunction)> = vec![
        ("t^2", function::power(2.0)),
        ("t log t", function::xlogx()),
        ("t^1.5", function::power(1.5)),
        ("t^3", function::power(3.0)),
        // convex, but f(0) = 1 > 0
        ("t^2 + 1", ScalarFunction::new("t^2 + 1", Interval::real_line(), |t| t * t + 1.0)),
    ];
    for (name, f) in &candidates {
        let row: Vec<String> = [HpVariant::Iv, HpVariant::V, HpVariant::Vi]
            .into_iter()
            .map(|variant| match check_hp(variant, f, &cfg) {
                Ok(v) if v.passed => format!("{variant}: pass"),
                Ok(v) => format!("{variant}: FAIL@{}", v.witness.map_or(0, |w| w.trial)),
                Err(e) => format!("{variant}: error {e}"),
            })
            .collect();
        println!("{name:<8} {}", row.join("  "));
    }

    if let Err(e) = check_hp(HpVariant::Vi, &function::power(2.0), &cfg.with_interval(Interval::open(0.0, 10.0)?)) {
        println!("open intervals are rejected: {e}");
    }
    Ok(())
}
