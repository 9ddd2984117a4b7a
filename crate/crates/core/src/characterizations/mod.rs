//! Randomized matrix-level tests of operator monotonicity and convexity: Löwner–Heinz,
//! the Hansen–Pedersen compression inequalities, and the corollaries linking monotonicity,
//! concavity and `t/f(t)`.
//!
//! Every check draws its trials from seeded, per-trial RNG streams, so a failed verdict can
//! be regenerated from `(seed, trial)` alone.

mod checks;
mod cross;
mod random;

pub use checks::{
    check_corollaries, check_hp, check_lh, check_midpoint_concave, check_midpoint_convex, check_monotone_pairs,
    complementary_contraction, corollary_report, counterexample_tp, hp_iv_gap, hp_v_gap, hp_vi_gap,
    tp_det_closed_form, tp_pair, CorollaryReport, HpVariant, MatrixInequality, TpCounterexample, TrialConfig,
    DEFAULT_DIM, DEFAULT_TOL_REL, DEFAULT_TRIALS, ENDPOINT_ROUNDING,
};
pub use cross::{loewner_witness_to_pair, pair_to_loewner_witness, pair_violation};
pub use random::{
    conjugate_diag, gaussian_matrix, random_contraction, random_hermitian, random_ordered_pair,
    random_ordered_pair_scaled, random_projection, random_unitary, sample_spectrum, OrderedPair,
    ZERO_EIGENVALUE_PROB,
};
