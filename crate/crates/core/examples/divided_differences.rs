//! Löwner and Kraus matrices, and randomized n-monotone / n-convex checks on grids.

use loewner::divided::{
    check_n_convex, check_n_monotone, dd1, dd2, kraus_matrix, loewner_matrix, to_real_rows, GridCheck,
};
use loewner::function;
use loewner::Interval;

fn main() -> loewner::Result<()> {
    let sqrt = function::power(0.5);
    let square = function::power(2.0);

    println!("f[1,4] for sqrt = {}", dd1(&sqrt, 1.0, 4.0)?);
    println!("f[1,1] for sqrt = {} (derivative branch)", dd1(&sqrt, 1.0, 1.0)?);
    println!("f[1,2,4] for t^3 = {}", dd2(&function::power(3.0), 1.0, 2.0, 4.0)?);

    println!("Löwner matrix of sqrt on {{1, 4}}: {:?}", to_real_rows(&loewner_matrix(&sqrt, &[1.0, 4.0])?));
    println!("Löwner matrix of t^2 on {{1, 4}}: {:?}", to_real_rows(&loewner_matrix(&square, &[1.0, 4.0])?));
    println!("Kraus matrix of t^3 at base 1 on {{1, 2}}: {:?}", to_real_rows(&kraus_matrix(&function::power(3.0), 1.0, &[1.0, 2.0])?));

    let j = Interval::open(0.0, 10.0)?;
    for (name, f) in [("sqrt", &sqrt), ("t^2", &square), ("log", &function::log())] {
        for n in [2, 3, 4] {
            let v = check_n_monotone(f, &j, GridCheck::new(n, 1000, 42))?;
            match &v.witness {
                None => println!("{name}: {n}-monotone on {j} ({} grids)", v.checks_run),
                Some(w) => println!("{name}: not {n}-monotone, grid {:?}, λ_min {:.3e}", w.points.as_deref().unwrap_or(&[]), w.lambda_min),
            }
        }
    }

    let sym = Interval::open(-1.0, 1.0)?;
    for (name, f) in [("t^2", &square), ("t^3", &function::power(3.0))] {
        let v = check_n_convex(f, &sym, GridCheck::new(3, 1000, 7))?;
        println!("{name} 3-convex on {sym}: {}", v.passed);
    }
    Ok(())
}
