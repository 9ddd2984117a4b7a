//! Functions on (−1, 1) normalized by f(0) and f'(0), their probability measures, and the
//! transfer to the half line through x ↦ (1+x)/(1−x).

use loewner::integral::{check_k_bounds, extreme_point, mobius, Atom, SymmetricMeasure};

fn main() -> loewner::Result<()> {
    for lam in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let g = extreme_point(lam);
        let r = check_k_bounds(&g)?;
        println!(
            "λ = {lam:+.1}: g(0.5) = {:.6}, g''(0) = {:.6}, bounds {}, equality on [0,1): {}",
            g.eval(0.5)?,
            r.second_derivative,
            if r.passed { "hold" } else { "fail" },
            r.upper_attained(1e-10)
        );
    }

    let s = SymmetricMeasure::new(2.5, 2.0, vec![Atom { lambda: -0.5, weight: 0.25 }, Atom { lambda: 0.5, weight: 0.75 }])?;
    let m = s.to_half_line()?;
    println!("half-line measure {}", m.to_json());
    for x in [-0.9, 0.0, 0.7] {
        println!("f({x}) = {:.12}, via (0, ∞): {:.12}", s.eval(x)?, m.eval(mobius(x)?)?);
    }

    let edge = SymmetricMeasure::new(0.0, 1.0, vec![Atom { lambda: -1.0, weight: 1.0 }])?;
    if let Err(e) = edge.to_half_line() {
        println!("mass at −1 has no image: {e}");
    }
    Ok(())
}
