//! Seeded Monte Carlo over the Bernoulli random-set model.
//!
//! Each trial draws its own random stream from `(master_seed, trial_index)`
//! through [`SplitMix64::for_trial`], so a trial's outcome never depends
//! on scheduling. Aggregation keeps exact integer moments (sums and sums
//! of squares in `u128`), which makes the parallel reduction commutative
//! and associative in the strictest sense: [`run_trials`] returns
//! bit-identical results for any thread count, and equals
//! [`run_trials_seq`] exactly.

use crate::law::ModelParams;
use crate::rng::{mix64, SplitMix64};
use crate::set::{Dominance, IntSet, SignedRangeSet};
use crate::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this inclusion probability, sampling jumps between members with
/// geometric gaps instead of drawing every index.
pub const SPARSE_THRESHOLD: f64 = 0.1;

/// Most witness sets a hunt retains.
pub const WITNESS_CAP: usize = 100;

/// The density schedule `p(n) = min(1, c·n^{−α})`.
///
/// With `α ∈ (0, 1)`, `p(n) → 0` while `n·p(n) → ∞`, the regime where
/// difference dominance becomes certain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySchedule {
    c: f64,
    alpha: f64,
}

impl DensitySchedule {
    pub fn new(c: f64, alpha: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidSchedule {
                reason: "coefficient c must be positive and finite",
            });
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidSchedule {
                reason: "exponent alpha must lie in (0, 1)",
            });
        }
        Ok(DensitySchedule { c, alpha })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Inclusion probability at universe size `n`.
    pub fn p(&self, n: usize) -> f64 {
        (self.c * (n as f64).powf(-self.alpha)).min(1.0)
    }
}

/// Aggregated outcome of a batch of trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialStats {
    pub params: ModelParams,
    pub trials: u64,
    pub count_diff_dominant: u64,
    pub count_sum_dominant: u64,
    pub count_balanced: u64,
    pub mean_s1: f64,
    pub var_s1: f64,
    pub mean_s2: f64,
    pub var_s2: f64,
    pub mean_card: f64,
    pub var_card: f64,
    /// Seed that reproduces this row (for sweep rows, the per-n derived
    /// seed).
    pub master_seed: u64,
}

/// Up to [`WITNESS_CAP`] sum-dominant sets found among `trials` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct HuntResult {
    /// Fraction of trials classified sum-dominant.
    pub fraction: f64,
    /// Exact number of sum-dominant trials.
    pub hits: u64,
    /// The sum-dominant sets from the earliest trial indices, in order.
    pub witnesses: Vec<IntSet>,
    /// True when more hits occurred than witnesses were kept.
    pub capped: bool,
}

/// Draw a random subset of `[0, n)`: each index enters independently
/// with probability `p`, consuming `rng` deterministically.
pub fn sample(params: &ModelParams, rng: &mut SplitMix64) -> IntSet {
    let mut set = IntSet::with_universe(params.n());
    sample_into(params, rng, &mut set);
    set
}

fn sample_into(params: &ModelParams, rng: &mut SplitMix64, set: &mut IntSet) {
    let n = params.n();
    let p = params.p();
    set.reset(n);
    if p == 0.0 {
        return;
    }
    if p < SPARSE_THRESHOLD {
        sample_sparse(n, p, rng, set);
    } else {
        sample_dense(n, p, rng, set);
    }
}

fn sample_dense(n: usize, p: f64, rng: &mut SplitMix64, set: &mut IntSet) {
    for i in 0..n {
        if rng.next_f64() < p {
            set.insert(i);
        }
    }
}

/// Skip-ahead sampling: the gap before the next member is geometric with
/// success probability `p`, drawn by inverting the CDF. One draw per
/// member instead of one per index, which matters when `np ≪ n`.
fn sample_sparse(n: usize, p: f64, rng: &mut SplitMix64, set: &mut IntSet) {
    let ln_q = (-p).ln_1p();
    let mut i = 0usize;
    loop {
        let gap = (rng.next_f64_open().ln() / ln_q).floor();
        if gap >= (n - i) as f64 {
            return;
        }
        i += gap as usize;
        set.insert(i);
        i += 1;
        if i == n {
            return;
        }
    }
}

/// Reusable per-worker buffers: the sampled set and its sum/difference
/// masks.
struct Scratch {
    set: IntSet,
    sum: IntSet,
    diff: SignedRangeSet,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            set: IntSet::with_universe(n),
            sum: IntSet::with_universe(2 * n - 1),
            diff: SignedRangeSet::with_half_range(n - 1),
        }
    }
}

/// Exact integer accumulator. Sums and sums of squares live in `u128`,
/// so merging partial accumulators in any order gives identical bits:
/// even 2⁶⁰ trials of squared sizes below 2⁴⁰ stay far from overflow.
#[derive(Debug, Default, Clone, PartialEq)]
struct Accum {
    trials: u64,
    dd: u64,
    sd: u64,
    bal: u64,
    sum_s1: u128,
    sumsq_s1: u128,
    sum_s2: u128,
    sumsq_s2: u128,
    sum_card: u128,
    sumsq_card: u128,
}

impl Accum {
    fn record(&mut self, s1: u64, s2: u64, card: u64) {
        self.trials += 1;
        match Dominance::from_sizes(s1 as usize, s2 as usize) {
            Dominance::DifferenceDominant => self.dd += 1,
            Dominance::SumDominant => self.sd += 1,
            Dominance::Balanced => self.bal += 1,
        }
        self.sum_s1 += s1 as u128;
        self.sumsq_s1 += (s1 as u128) * (s1 as u128);
        self.sum_s2 += s2 as u128;
        self.sumsq_s2 += (s2 as u128) * (s2 as u128);
        self.sum_card += card as u128;
        self.sumsq_card += (card as u128) * (card as u128);
    }

    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    fn merge(mut self, other: Accum) -> Accum {
        self.trials += other.trials;
        self.dd += other.dd;
        self.sd += other.sd;
        self.bal += other.bal;
        self.sum_s1 += other.sum_s1;
        self.sumsq_s1 += other.sumsq_s1;
        self.sum_s2 += other.sum_s2;
        self.sumsq_s2 += other.sumsq_s2;
        self.sum_card += other.sum_card;
        self.sumsq_card += other.sumsq_card;
        self
    }

    fn finish(&self, params: ModelParams, master_seed: u64) -> TrialStats {
        let (mean_s1, var_s1) = mean_var(self.trials, self.sum_s1, self.sumsq_s1);
        let (mean_s2, var_s2) = mean_var(self.trials, self.sum_s2, self.sumsq_s2);
        let (mean_card, var_card) = mean_var(self.trials, self.sum_card, self.sumsq_card);
        TrialStats {
            params,
            trials: self.trials,
            count_diff_dominant: self.dd,
            count_sum_dominant: self.sd,
            count_balanced: self.bal,
            mean_s1,
            var_s1,
            mean_s2,
            var_s2,
            mean_card,
            var_card,
            master_seed,
        }
    }
}

/// Population mean and variance from exact integer moments. The
/// numerator `t·Σx² − (Σx)²` is a nonnegative integer, so the variance
/// cannot round below zero. Zero trials yield zero moments.
fn mean_var(t: u64, sum: u128, sumsq: u128) -> (f64, f64) {
    if t == 0 {
        return (0.0, 0.0);
    }
    let num = t as u128 * sumsq - sum * sum;
    let tf = t as f64;
    (sum as f64 / tf, num as f64 / (tf * tf))
}

/// One trial: sample under the stream for `(master_seed, index)`,
/// classify, record sizes.
fn run_one(params: &ModelParams, master_seed: u64, index: u64, scr: &mut Scratch, acc: &mut Accum) {
    let mut rng = SplitMix64::for_trial(master_seed, index);
    sample_into(params, &mut rng, &mut scr.set);
    scr.set.sumset_into(&mut scr.sum);
    scr.set.diffset_into(&mut scr.diff);
    acc.record(
        scr.sum.len() as u64,
        scr.diff.len() as u64,
        scr.set.len() as u64,
    );
}

fn run_range(params: &ModelParams, master_seed: u64, lo: u64, hi: u64) -> Accum {
    let mut acc = Accum::default();
    let mut scr = Scratch::new(params.n());
    for t in lo..hi {
        run_one(params, master_seed, t, &mut scr, &mut acc);
    }
    acc
}

/// Run `trials` independent samples single-threaded.
pub fn run_trials_seq(params: &ModelParams, trials: u64, master_seed: u64) -> TrialStats {
    run_range(params, master_seed, 0, trials).finish(*params, master_seed)
}

/// Run `trials` independent samples, fanned over the current rayon pool
/// when the `parallel` feature is on. Bit-identical to
/// [`run_trials_seq`] for every field, regardless of thread count.
pub fn run_trials(params: &ModelParams, trials: u64, master_seed: u64) -> TrialStats {
    #[cfg(feature = "parallel")]
    {
        let acc = (0..trials)
            .into_par_iter()
            .fold(
                || (Accum::default(), Scratch::new(params.n())),
                |(mut acc, mut scr), t| {
                    run_one(params, master_seed, t, &mut scr, &mut acc);
                    (acc, scr)
                },
            )
            .map(|(acc, _)| acc)
            .reduce(Accum::default, Accum::merge);
        acc.finish(*params, master_seed)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_trials_seq(params, trials, master_seed)
    }
}

/// One [`run_trials`] per grid point with `p = schedule.p(n)` and seed
/// `mix64(master_seed, n)`, so a row can be reproduced in isolation.
///
/// The grid must be nonempty and strictly ascending.
pub fn sweep(
    schedule: &DensitySchedule,
    n_grid: &[usize],
    trials: u64,
    master_seed: u64,
) -> Result<Vec<TrialStats>> {
    if n_grid.is_empty() {
        return Err(Error::InvalidGrid {
            reason: "grid must contain at least one universe size",
        });
    }
    if !n_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidGrid {
            reason: "grid must be strictly ascending",
        });
    }
    n_grid
        .iter()
        .map(|&n| {
            let params = ModelParams::new(n, schedule.p(n))?;
            Ok(run_trials(&params, trials, mix64(master_seed, n as u64)))
        })
        .collect()
}

/// Sorted-by-trial-index merge of two witness lists, truncated to
/// [`WITNESS_CAP`]. Keeping the earliest indices makes the survivor set
/// independent of how trials were partitioned.
#[cfg_attr(not(feature = "parallel"), allow(dead_code))]
fn merge_witnesses(
    a: Vec<(u64, IntSet)>,
    b: Vec<(u64, IntSet)>,
) -> Vec<(u64, IntSet)> {
    let mut out = Vec::with_capacity((a.len() + b.len()).min(WITNESS_CAP));
    let mut ai = a.into_iter().peekable();
    let mut bi = b.into_iter().peekable();
    while out.len() < WITNESS_CAP {
        let take_a = match (ai.peek(), bi.peek()) {
            (Some(x), Some(y)) => x.0 <= y.0,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        let item = if take_a { ai.next() } else { bi.next() };
        out.push(item.expect("peeked"));
    }
    out
}

#[derive(Default)]
struct HuntAccum {
    hits: u64,
    witnesses: Vec<(u64, IntSet)>,
}

impl HuntAccum {
    fn record(&mut self, index: u64, set: &IntSet) {
        self.hits += 1;
        if self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push((index, set.clone()));
        }
    }

    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    fn merge(self, other: HuntAccum) -> HuntAccum {
        HuntAccum {
            hits: self.hits + other.hits,
            witnesses: merge_witnesses(self.witnesses, other.witnesses),
        }
    }

    fn finish(self, trials: u64) -> HuntResult {
        let fraction = if trials == 0 {
            0.0
        } else {
            self.hits as f64 / trials as f64
        };
        let capped = self.hits as usize > self.witnesses.len();
        HuntResult {
            fraction,
            hits: self.hits,
            witnesses: self.witnesses.into_iter().map(|(_, s)| s).collect(),
            capped,
        }
    }
}

fn hunt_one(
    params: &ModelParams,
    master_seed: u64,
    index: u64,
    scr: &mut Scratch,
    acc: &mut HuntAccum,
) {
    let mut rng = SplitMix64::for_trial(master_seed, index);
    sample_into(params, &mut rng, &mut scr.set);
    scr.set.sumset_into(&mut scr.sum);
    scr.set.diffset_into(&mut scr.diff);
    if Dominance::from_sizes(scr.sum.len(), scr.diff.len()) == Dominance::SumDominant {
        acc.record(index, &scr.set);
    }
}

/// Search `trials` samples for sum-dominant sets. Deterministic in
/// `(params, trials, master_seed)` under any thread count; the witness
/// list holds the hits with the smallest trial indices.
pub fn sum_dominant_hunt(params: &ModelParams, trials: u64, master_seed: u64) -> HuntResult {
    #[cfg(feature = "parallel")]
    {
        (0..trials)
            .into_par_iter()
            .fold(
                || (HuntAccum::default(), Scratch::new(params.n())),
                |(mut acc, mut scr), t| {
                    hunt_one(params, master_seed, t, &mut scr, &mut acc);
                    (acc, scr)
                },
            )
            .map(|(acc, _)| acc)
            .reduce(HuntAccum::default, HuntAccum::merge)
            .finish(trials)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut acc = HuntAccum::default();
        let mut scr = Scratch::new(params.n());
        for t in 0..trials {
            hunt_one(params, master_seed, t, &mut scr, &mut acc);
        }
        acc.finish(trials)
    }
}
