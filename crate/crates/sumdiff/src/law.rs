//! Closed-form probability laws of the Bernoulli random-set model.
//!
//! For a random subset of `[0, n)` where each index enters independently
//! with probability `p`, this module gives the exact per-index probability
//! that a value is realized as a sum or as a difference of two members,
//! the exact and asymptotic expectations of the sumset and difference-set
//! sizes, and the covariance/variance upper bounds used to separate the
//! two sizes.
//!
//! Per-index sum probabilities factor over disjoint witness pairs. The
//! per-index difference law has overlapping witnesses, so it is computed
//! exactly by splitting `[0, n)` into residue chains mod `|i|` and running
//! a no-adjacent-pair recurrence along each chain; the independent-pair
//! approximation survives only in the asymptotic fields.

use crate::{Error, Result};

/// The Bernoulli model `(n, p)`: universe size and inclusion probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n: usize,
    p: f64,
}

impl ModelParams {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyUniverse);
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability {
                value: p,
                interval: "[0, 1]",
            });
        }
        Ok(ModelParams { n, p })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// `(1 − x)^t` evaluated as `exp(t · ln1p(−x))`, which stays accurate for
/// small `x` and large `t` where naive powering underflows or cancels.
#[inline]
fn pow_one_minus(x: f64, t: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&x));
    if x == 0.0 {
        return 1.0;
    }
    if x == 1.0 {
        return if t == 0.0 { 1.0 } else { 0.0 };
    }
    (t * (-x).ln_1p()).exp()
}

/// `(1 − p²)^t`; see [`pow_one_minus`].
#[inline]
fn q_pow(p: f64, t: f64) -> f64 {
    pow_one_minus(p * p, t)
}

/// Number of unordered pairs `a < b` in `[0, n)` with `a + b = i`.
fn sum_pair_count(i: usize, n: usize) -> u64 {
    let i = i as i64;
    let n = n as i64;
    let hi = (i - 1).div_euclid(2);
    let lo = (i - (n - 1)).max(0);
    (hi - lo + 1).max(0) as u64
}

/// Exact `P(i ∈ A + A)`: the index `i` is hit iff some witness pair is
/// fully included. Distinct witness pairs occupy disjoint index sets, so
/// the misses multiply: `1 − (1−p)^{c} (1−p²)^{m}` with `m` unordered
/// pairs and `c = 1` iff `i` is even with `i/2` in range.
pub fn p_sum_hit(i: usize, params: &ModelParams) -> Result<f64> {
    let n = params.n;
    if i > 2 * n - 2 {
        return Err(Error::IndexOutOfRange {
            index: i as i64,
            lo: 0,
            hi: (2 * n - 2) as i64,
        });
    }
    let p = params.p;
    let m = sum_pair_count(i, n);
    let self_pair = i.is_multiple_of(2) && i / 2 < n;
    let mut miss = q_pow(p, m as f64);
    if self_pair {
        miss *= 1.0 - p;
    }
    Ok(1.0 - miss)
}

/// Probability that `len` independent Bernoulli(`p`) bits contain no two
/// adjacent ones: `f(L) = (1−p) f(L−1) + p(1−p) f(L−2)`, `f(0) = f(1) = 1`.
pub fn no_adjacent_prob(len: usize, p: f64) -> f64 {
    no_adjacent_table(len, p)[len]
}

/// All of `f(0..=len)` in one pass.
fn no_adjacent_table(len: usize, p: f64) -> Vec<f64> {
    let mut f = Vec::with_capacity(len + 1);
    f.push(1.0);
    if len == 0 {
        return f;
    }
    f.push(1.0);
    let q = 1.0 - p;
    let pq = p * q;
    for l in 2..=len {
        f.push(q * f[l - 1] + pq * f[l - 2]);
    }
    f
}

/// Exact `P(i ∈ A − A)`.
///
/// For `i = 0` this is the nonempty-set probability. For `|i| ≥ 1` the
/// universe splits into `|i|` chains by residue mod `|i|`; the difference
/// `i` is realized iff some chain holds two adjacent selected elements,
/// so the miss probability is the product of per-chain no-adjacent
/// probabilities. Symmetric in `±i`.
pub fn p_diff_hit(i: i64, params: &ModelParams) -> Result<f64> {
    let n = params.n;
    let h = (n - 1) as i64;
    if i < -h || i > h {
        return Err(Error::IndexOutOfRange {
            index: i,
            lo: -h,
            hi: h,
        });
    }
    let p = params.p;
    if i == 0 {
        return Ok(1.0 - pow_one_minus(p, n as f64));
    }
    let step = i.unsigned_abs() as usize;
    // n = q·step + s: s chains of length q+1, step−s chains of length q.
    let (q, s) = (n / step, n % step);
    let f = no_adjacent_table(q + 1, p);
    let miss = f[q + 1].powi(s as i32) * f[q].powi((step - s) as i32);
    Ok(1.0 - miss)
}

/// Exact and asymptotic expectations of `S₁ = |A+A|` and `S₂ = |A−A|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectationSummary {
    /// Exact `E S₁`, summed from [`p_sum_hit`].
    pub exact_sum: f64,
    /// Exact `E S₂`, summed from [`p_diff_hit`].
    pub exact_diff: f64,
    /// `2n − (2 − 2(1−p²)^{n/2}) / p²`.
    pub asymptotic_sum: f64,
    /// `2n − (1 − (1−p²)^n) / p²`.
    pub asymptotic_diff: f64,
    /// `exact_diff − exact_sum`.
    pub gap: f64,
}

/// Expectations of the sumset and difference-set sizes under `params`.
///
/// All fields are 0 when `p = 0` (the asymptotic forms are undefined
/// there, and the exact sums vanish anyway).
pub fn expectation_summary(params: &ModelParams) -> ExpectationSummary {
    let n = params.n;
    let p = params.p;
    if p == 0.0 {
        return ExpectationSummary {
            exact_sum: 0.0,
            exact_diff: 0.0,
            asymptotic_sum: 0.0,
            asymptotic_diff: 0.0,
            gap: 0.0,
        };
    }
    let mut exact_sum = 0.0;
    for i in 0..=(2 * n - 2) {
        exact_sum += p_sum_hit(i, params).expect("index in range");
    }
    let mut exact_diff = p_diff_hit(0, params).expect("index in range");
    for i in 1..=(n as i64 - 1) {
        exact_diff += 2.0 * p_diff_hit(i, params).expect("index in range");
    }
    let nf = n as f64;
    let p2 = p * p;
    let asymptotic_sum = 2.0 * nf - (2.0 - 2.0 * q_pow(p, nf / 2.0)) / p2;
    let asymptotic_diff = 2.0 * nf - (1.0 - q_pow(p, nf)) / p2;
    ExpectationSummary {
        exact_sum,
        exact_diff,
        asymptotic_sum,
        asymptotic_diff,
        gap: exact_diff - exact_sum,
    }
}

/// The expectation gap `(E S₂ − E S₁) · p²`, from the exact sums.
///
/// Bounded below by a positive constant once `p ≳ n^{−1/2}`. The same
/// combination of the asymptotic fields collapses to
/// `(1 − (1−p²)^{n/2})²` by algebra; the exact gap additionally carries
/// the dependence corrections, which vanish only as `p → 0`.
pub fn expectation_gap_scaled(params: &ModelParams) -> Result<f64> {
    let p = params.p;
    if p == 0.0 {
        return Err(Error::InvalidProbability {
            value: p,
            interval: "(0, 1]",
        });
    }
    Ok(expectation_summary(params).gap * p * p)
}

/// Which hit-indicator family an index refers to: sums over `[0, 2n−2]`
/// or differences over `[−(n−1), n−1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HitFamily {
    Sum,
    Diff,
}

fn hit_prob(index: i64, family: HitFamily, params: &ModelParams) -> Result<f64> {
    match family {
        HitFamily::Sum => {
            if index < 0 {
                return Err(Error::IndexOutOfRange {
                    index,
                    lo: 0,
                    hi: (2 * params.n - 2) as i64,
                });
            }
            p_sum_hit(index as usize, params)
        }
        HitFamily::Diff => p_diff_hit(index, params),
    }
}

/// Unconditional covariance upper bound `P(ζᵢ = 1)(1 − P(ζₖ = 1))`,
/// valid because `P(both) ≤ P(first)`.
pub fn cov_bound_markov(i: i64, k: i64, family: HitFamily, params: &ModelParams) -> Result<f64> {
    if i >= k {
        return Err(Error::UnorderedIndexPair { i, k });
    }
    let pi = hit_prob(i, family, params)?;
    let pk = hit_prob(k, family, params)?;
    Ok(pi * (1.0 - pk))
}

/// Witness-triple covariance bound for the sum family: `i·p³` when
/// `k ≤ n`, `max(0, i+n−k)·p³` when `i ≤ n < k`, and the conservative
/// `i·p³` for the remaining in-range pairs.
pub fn cov_bound_triple(i: usize, k: usize, params: &ModelParams) -> Result<f64> {
    let n = params.n;
    if k > 2 * n - 2 {
        return Err(Error::IndexOutOfRange {
            index: k as i64,
            lo: 0,
            hi: (2 * n - 2) as i64,
        });
    }
    if i >= k {
        return Err(Error::UnorderedIndexPair {
            i: i as i64,
            k: k as i64,
        });
    }
    let p3 = params.p.powi(3);
    let bound = if k <= n {
        i as f64 * p3
    } else if i <= n {
        (i + n).saturating_sub(k) as f64 * p3
    } else {
        i as f64 * p3
    };
    Ok(bound)
}

/// Evaluation of the total covariance bound `B(k₀) = k₀³p³ + k₀(1−p²)^{k₀}/p⁴`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceBound {
    /// Cut index between the two per-pair estimates.
    pub k0: u64,
    /// `B(k₀)`.
    pub bound: f64,
    /// The direct sum `Σ_{k ≤ n} min(k²p³, k(1−p²)ᵏ/p²)`.
    pub direct_sum: f64,
}

/// Evaluates `B(k₀)`; `None` picks `k₀ = ⌈7 p⁻² ln(1/p)⌉`.
///
/// Requires `0 < p < 1`. A supplied `k₀` must be positive.
pub fn variance_bound_total(params: &ModelParams, k0: Option<u64>) -> Result<VarianceBound> {
    let p = params.p;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability {
            value: p,
            interval: "(0, 1)",
        });
    }
    let k0 = match k0 {
        Some(k) => {
            assert!(k >= 1, "k0 must be positive");
            k
        }
        None => (7.0 / (p * p) * (1.0 / p).ln()).ceil() as u64,
    };
    let kf = k0 as f64;
    let bound = kf.powi(3) * p.powi(3) + kf * q_pow(p, kf) / p.powi(4);
    let p2 = p * p;
    let p3 = p * p2;
    let mut direct_sum = 0.0;
    for k in 1..=params.n {
        let kf = k as f64;
        direct_sum += (kf * kf * p3).min(kf * q_pow(p, kf) / p2);
    }
    Ok(VarianceBound {
        k0,
        bound,
        direct_sum,
    })
}
