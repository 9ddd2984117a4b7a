//! User functions from infix expressions, with symbolic derivatives, fed into the checks.

use loewner::cli::{parse_expr, resolve_function};
use loewner::divided::{check_n_convex, check_n_monotone, GridCheck};
use loewner::Interval;

fn main() -> loewner::Result<()> {
    let e = parse_expr("t / (1 - 0.5*t)")?;
    println!("f  = {e}\nf' = {}\nf'' = {}", e.derivative(), e.derivative().derivative());

    let j = Interval::open(-1.0, 1.0)?;
    let f = resolve_function("t / (1 - 0.5*t)", Some(&j))?;
    println!("3-monotone on {j}: {}", check_n_monotone(&f, &j, GridCheck::new(3, 1000, 1))?.passed);

    for alpha in [-1.0, 0.4] {
        let src = format!("(t + {alpha}) * t / (1 - 0.5*t)");
        let g = resolve_function(&src, Some(&j))?;
        println!("{src}: 3-convex {}", check_n_convex(&g, &j, GridCheck::new(3, 1000, 2))?.passed);
    }

    for bad in ["t^^2", "sin(t", "2 t"] {
        println!("{bad:?}: {}", parse_expr(bad).map(|_| "parsed".to_string()).unwrap_or_else(|e| e.to_string()));
    }
    Ok(())
}
