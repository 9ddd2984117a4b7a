//! A failing Löwner matrix becomes an explicit ordered pair B ≤ A with f(B) ≰ f(A), and a
//! failing pair is turned back into a grid.

use loewner::characterizations::{
    loewner_witness_to_pair, pair_to_loewner_witness, pair_violation, random_ordered_pair, OrderedPair,
};
use loewner::divided::{check_n_monotone, GridCheck};
use loewner::function;
use loewner::Interval;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> loewner::Result<()> {
    let f = function::exp();
    let j = Interval::open(0.0, 3.0)?;

    let v = check_n_monotone(&f, &j, GridCheck::new(2, 100, 3))?;
    let points = v.witness.and_then(|w| w.points).expect("exp is not 2-monotone");
    println!("grid witness {points:?}");
    if let Some(OrderedPair { a, b }) = loewner_witness_to_pair(&f, &j, &points)? {
        println!("B = diag{points:?}, A = B + ε·J, ‖A − B‖_F = {:.3e}", a.sub(&b)?.frobenius_norm());
        let pair = OrderedPair::new(a, b, &j)?;
        println!("λ_min(exp(A) − exp(B)) = {:.3e}", pair_violation(&f, &pair)?.unwrap_or(0.0));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let pair = random_ordered_pair(&j, 3, &mut rng)?;
        if pair_violation(&f, &pair)?.is_none() {
            continue;
        }
        let grid = pair_to_loewner_witness(&f, &pair)?;
        println!("random 3×3 pair violates the order; grid on the segment: {grid:?}");
        break;
    }
    Ok(())
}
