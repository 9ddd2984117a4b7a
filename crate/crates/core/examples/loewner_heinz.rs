//! B ≤ A implies B^p ≤ A^p exactly for p in [0, 1]. This runs the randomized check over a
//! range of exponents, and for p > 1 prints the first failing trial and the fixed 2×2 pair.

use loewner::characterizations::{check_lh, counterexample_tp, MatrixInequality, TrialConfig};
use loewner::Interval;

fn main() -> loewner::Result<()> {
    let cfg = TrialConfig::new(Interval::closed_open(0.0, 10.0)?, 2024).with_trials(1000);
    for p in [0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 3.0] {
        let v = check_lh(p, &cfg)?;
        match v.witness {
            None => println!("p = {p:<5} holds on {} trials", v.checks_run),
            Some(w) => {
                let certified = MatrixInequality::LoewnerHeinz { p }.recheck(&w)?;
                println!(
                    "p = {p:<5} fails at trial {} ({}×{}), λ_min(A^p − B^p) = {:.3e}, recheck {certified}",
                    w.trial, w.matrices[0].n, w.matrices[0].n, w.lambda_min
                );
            }
        }
    }

    println!();
    for p in [0.5, 1.0, 1.5, 2.0, 3.0] {
        let c = counterexample_tp(p)?;
        println!(
            "A = diag(3/2, 3/4), B = [[1/2,1/2],[1/2,1/2]], p = {p}: det(A^p − B^p) = {:+.6} (closed form {:+.6}), order holds: {}",
            c.det_numeric, c.det_closed_form, c.order_holds
        );
    }
    Ok(())
}
