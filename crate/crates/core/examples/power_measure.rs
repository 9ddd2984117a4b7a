//! Representing measures on [0, ∞]: f(t) = a + b·t + ∫ t(1+λ)/(t+λ) dm(λ).

use loewner::integral::{eval_measure, measure_power, phi, RepresentingMeasure};

fn main() -> loewner::Result<()> {
    println!("kernel at λ = 0, 1, ∞ for t = 3: {} {} {}", phi(3.0, 0.0), phi(3.0, 1.0), phi(3.0, f64::INFINITY));

    let ts = [0.01, 0.5, 1.0, 4.0, 100.0];
    for p in [0.25, 0.5, 0.75] {
        let m = measure_power(p)?;
        let worst = ts
            .iter()
            .map(|&t| Ok((eval_measure(&m, t)? - t.powf(p)).abs() / t.powf(p)))
            .collect::<loewner::Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!("t^{p}: mass {:.6}, worst relative error {worst:.1e}", m.total_mass()?);
    }

    let text = r#"{"atom_zero":1.0,"atom_inf":0.5,"atoms":[{"lambda":2.0,"weight":0.25}],"density":null}"#;
    let m = RepresentingMeasure::from_json(text)?;
    let f = m.to_function("g");
    for t in [0.0, 1.0, 10.0] {
        println!("{}({t}) = {}", f.name(), f.eval(t)?);
    }
    let sum = m.add(&measure_power(0.5)?)?;
    println!("sum of measures serializes as {}", sum.to_json());
    Ok(())
}
