//! Sumset/difference-set analysis of random subsets of `{0, …, n−1}`.
//!
//! A finite set of integers usually has more pairwise differences than
//! pairwise sums (differences come in `±` pairs, sums do not), yet
//! sum-dominant sets exist. This crate studies the question
//! quantitatively under the Bernoulli model where each of `n` indices is
//! included independently with probability `p`:
//!
//! - [`set`]: bitset-backed sets with sumset, difference set, additive
//!   energy, Sidon detection, and dominance classification.
//! - [`law`]: exact per-index hit probabilities, expectation summaries,
//!   and covariance/variance bounds in closed form.
//! - [`oracle`]: exhaustive enumeration over all `2^n` subsets for small
//!   `n`, the ground truth the closed forms are checked against.
//! - [`mc`]: seeded Monte Carlo estimation at scales enumeration cannot
//!   reach, with deterministic parallel reduction.
//!
//! With the default `parallel` feature the trial loop and the oracle
//! enumeration fan out via rayon; `--no-default-features` builds the
//! same API single-threaded. Results are bit-identical either way.

pub mod law;
pub mod mc;
pub mod oracle;
pub mod rng;
pub mod set;

mod error;

pub use error::{Error, Result};
pub use law::{
    cov_bound_markov, cov_bound_triple, expectation_gap_scaled, expectation_summary,
    no_adjacent_prob, p_diff_hit, p_sum_hit, variance_bound_total, ExpectationSummary, HitFamily,
    ModelParams, VarianceBound,
};
pub use mc::{run_trials, run_trials_seq, sum_dominant_hunt, sweep, DensitySchedule, HuntResult,
    TrialStats};
pub use oracle::{exact_cov, exact_law, exact_law_seq, ExactLaw};
pub use set::{Dominance, IntSet, SignedRangeSet};
