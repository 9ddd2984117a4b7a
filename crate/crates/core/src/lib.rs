//! Operator monotone and operator convex functions, numerically.
//!
//! * [`linalg`]: Hermitian matrices, Jacobi eigendecomposition, functional calculus and the
//!   Loewner order.
//! * [`divided`]: divided differences and the Löwner/Kraus matrix tests on sampled grids.
//! * [`characterizations`]: randomized matrix-inequality checks with certified witnesses.
//! * [`integral`]: representing measures, quadrature, Möbius transport and NNLS fitting.
//! * [`cli`]: the `loewner` command-line front end.

pub mod characterizations;
pub mod cli;
pub mod divided;
pub mod error;
pub mod function;
pub mod integral;
pub mod linalg;
pub mod verdict;

pub use error::{Error, Result};
pub use function::ScalarFunction;
pub use linalg::{HermitianMatrix, Interval, Matrix};
pub use verdict::{Verdict, Witness};
