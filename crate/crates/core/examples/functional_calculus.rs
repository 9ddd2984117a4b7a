//! f(A) through the spectral resolution, for registry functions and ad hoc closures.
//!
//! Run with `cargo run --example functional_calculus`.

use loewner::characterizations::{random_hermitian, random_unitary};
use loewner::divided::to_real_rows;
use loewner::function::{self, ScalarFunction};
use loewner::linalg::{functional_calculus, matrix_power, spectral_resolution, CLUSTER_TOL};
use loewner::{HermitianMatrix, Interval};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn show(label: &str, m: &HermitianMatrix) {
    println!("{label}:");
    for row in to_real_rows(m) {
        println!("  {}", row.iter().map(|x| format!("{x:>10.6}")).collect::<Vec<_>>().join(" "));
    }
}

fn main() -> loewner::Result<()> {
    let a = HermitianMatrix::from_diag(&[1.5, 0.75]);
    let b = HermitianMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]])?;

    show("A^2", &functional_calculus(&function::power(2.0), &a)?);
    // B is a projection, so every power p > 0 returns B
    show("B^(1/2)", &matrix_power(&b, 0.5)?);
    show("log(I + B)", &functional_calculus(&function::log().restricted(Interval::positive()), &b.add(&HermitianMatrix::identity(2))?)?);

    let s = spectral_resolution(&b, CLUSTER_TOL)?;
    println!("spectrum of B: {:?}", s.eigenvalues());

    // anything with a domain works, derivatives are optional
    let softplus = ScalarFunction::new("softplus", Interval::real_line(), |t: f64| t.exp().ln_1p());
    show("softplus(A - B)", &functional_calculus(&softplus, &a.sub(&b)?)?);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let h = random_hermitian(&Interval::open(0.0, 4.0)?, 4, &mut rng)?;
    let u = random_unitary(4, &mut rng);
    let f = function::power(0.5);
    let lhs = functional_calculus(&f, &h.congruence(&u)?)?;
    let rhs = functional_calculus(&f, &h)?.congruence(&u)?;
    println!("‖f(U*HU) − U*f(H)U‖_F = {:.2e}", lhs.sub(&rhs)?.frobenius_norm());

    match functional_calculus(&function::log(), &b) {
        Ok(_) => println!("log(B) unexpectedly succeeded"),
        Err(e) => println!("log(B) is rejected: {e}"),
    }
    Ok(())
}
