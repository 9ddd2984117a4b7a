//! Masses at 0 and ∞ of the representing measure: a = f(0⁺), b = lim f(t)/t.

use loewner::function::{self, ScalarFunction};
use loewner::integral::extract_atoms;
use loewner::Interval;

fn main() -> loewner::Result<()> {
    let list = [
        function::affine(2.0, 1.0),
        function::power(0.5),
        ScalarFunction::new("2t/(t+1) + 3", Interval::nonnegative(), |t| 2.0 * t / (t + 1.0) + 3.0),
        ScalarFunction::new("t + sqrt(t)", Interval::nonnegative(), |t| t + t.sqrt()),
        function::logmean(),
    ];
    for f in &list {
        match extract_atoms(f) {
            Ok(at) => println!("{:<14} a = {:.8}, b = {:.8}", f.name(), at.a, at.b),
            Err(e) => println!("{:<14} {e}", f.name()),
        }
    }
    Ok(())
}
