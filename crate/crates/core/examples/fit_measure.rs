//! Recover a discrete measure from samples by nonnegative least squares.

use loewner::integral::{fit_discrete_measure, samples_to_csv};

fn samples(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    (0..80).map(|i| 10f64.powf(-2.0 + 4.0 * i as f64 / 79.0)).map(|t| (t, f(t))).collect()
}

fn main() -> loewner::Result<()> {
    // 2t/(t+1) is a single atom of weight 1 at λ = 1
    let exact = samples(|t| 2.0 * t / (t + 1.0));
    let fit = fit_discrete_measure(&exact, 61)?;
    println!("2t/(t+1): atoms {:?}, a = {:.2e}, b = {:.2e}, residual {:.1e}", fit.measure.atoms, fit.measure.atom_zero, fit.measure.atom_inf, fit.residual_norm);

    let sqrt = samples(f64::sqrt);
    let fit = fit_discrete_measure(&sqrt, 64)?;
    println!(
        "sqrt: {} atoms, total mass {:.4}, max relative residual {:.1e} after {} iterations",
        fit.measure.atoms.len(),
        fit.total_mass,
        fit.max_rel_residual,
        fit.iterations
    );

    let csv = samples_to_csv(&exact[..3]);
    print!("CSV input looks like:\n{csv}");
    Ok(())
}
