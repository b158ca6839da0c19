//! Exhaustive-enumeration ground truth for small universes.
//!
//! Every subset of `[0, n)` is walked as an integer mask and weighted by
//! `p^|A| (1−p)^{n−|A|}`, which yields the exact law of the model: hit
//! probabilities per index, moments of the sumset and difference-set
//! sizes, dominance probabilities, and pairwise indicator covariances.
//! The closed forms in [`crate::law`] and the estimators in [`crate::mc`]
//! are both tested against this module.
//!
//! Masks fit in `u32` (capacity 24) and the shifted sum/difference masks
//! in `u64` (2·24 − 1 = 47 bits), so the inner loop is pure register
//! arithmetic.

use crate::law::{HitFamily, ModelParams};
use crate::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Largest universe [`exact_law`] enumerates (2²⁴ subsets).
pub const LAW_CAPACITY: usize = 24;
/// Largest universe [`exact_cov`] enumerates per pair.
pub const COV_CAPACITY: usize = 20;

/// The exact distributional summary of the model at `(n, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactLaw {
    pub params: ModelParams,
    /// `P(i ∈ A+A)` for `i` in `0..=2n−2`.
    pub p_sum_hit_by_index: Vec<f64>,
    /// `P(d ∈ A−A)` for `d` in `−(n−1)..=n−1`, stored at `d + n − 1`.
    pub p_diff_hit_by_index: Vec<f64>,
    pub e_s1: f64,
    pub e_s2: f64,
    pub var_s1: f64,
    pub var_s2: f64,
    pub p_diff_dominant: f64,
    pub p_sum_dominant: f64,
    pub p_balanced: f64,
}

/// `p^k (1−p)^{n−k}` for `k` in `0..=n`.
fn cardinality_weights(n: usize, p: f64) -> Vec<f64> {
    (0..=n)
        .map(|k| p.powi(k as i32) * (1.0 - p).powi((n - k) as i32))
        .collect()
}

/// Sum and difference masks of the subset `mask` of `[0, n)`.
///
/// Sum bit `i` means `i ∈ A+A`; difference bit `j` means `j − (n−1) ∈ A−A`.
#[inline]
fn pair_masks(mask: u32, n: usize) -> (u64, u64) {
    let wide = mask as u64;
    let mut sum = 0u64;
    let mut diff = 0u64;
    let mut m = mask;
    while m != 0 {
        let b = m.trailing_zeros() as usize;
        sum |= wide << b;
        diff |= wide << (n - 1 - b);
        m &= m - 1;
    }
    (sum, diff)
}

/// Kahan-compensated sum. Plain f64 accumulation over 2²⁴ masks drifts
/// by ~10⁻⁹, far past the 10⁻¹² agreement promised across worker counts;
/// compensation keeps every partial accurate to a few ulps.
#[derive(Debug, Clone, Copy, Default)]
struct Kahan {
    s: f64,
    c: f64,
}

impl Kahan {
    #[inline]
    fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.s + y;
        self.c = (t - self.s) - y;
        self.s = t;
    }

    /// Fold another compensated sum in (its value is `s − c`).
    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    fn absorb(&mut self, other: Kahan) {
        self.add(other.s);
        self.add(-other.c);
    }

    fn value(self) -> f64 {
        self.s - self.c
    }
}

/// Per-worker accumulator; merging absorbs compensated partial sums.
struct Accum {
    weight: Kahan,
    e_s1: Kahan,
    e_s1_sq: Kahan,
    e_s2: Kahan,
    e_s2_sq: Kahan,
    p_dd: Kahan,
    p_sd: Kahan,
    p_bal: Kahan,
    sum_hits: Vec<Kahan>,
    diff_hits: Vec<Kahan>,
}

impl Accum {
    fn new(n: usize) -> Self {
        Accum {
            weight: Kahan::default(),
            e_s1: Kahan::default(),
            e_s1_sq: Kahan::default(),
            e_s2: Kahan::default(),
            e_s2_sq: Kahan::default(),
            p_dd: Kahan::default(),
            p_sd: Kahan::default(),
            p_bal: Kahan::default(),
            sum_hits: vec![Kahan::default(); 2 * n - 1],
            diff_hits: vec![Kahan::default(); 2 * n - 1],
        }
    }

    fn add_range(&mut self, lo: u64, hi: u64, n: usize, weights: &[f64]) {
        for mask in lo..hi {
            let mask = mask as u32;
            let w = weights[mask.count_ones() as usize];
            let (sum, diff) = pair_masks(mask, n);
            let s1 = sum.count_ones() as f64;
            let s2 = diff.count_ones() as f64;
            self.weight.add(w);
            self.e_s1.add(w * s1);
            self.e_s1_sq.add(w * s1 * s1);
            self.e_s2.add(w * s2);
            self.e_s2_sq.add(w * s2 * s2);
            if s2 > s1 {
                self.p_dd.add(w);
            } else if s1 > s2 {
                self.p_sd.add(w);
            } else {
                self.p_bal.add(w);
            }
            let mut m = sum;
            while m != 0 {
                self.sum_hits[m.trailing_zeros() as usize].add(w);
                m &= m - 1;
            }
            let mut m = diff;
            while m != 0 {
                self.diff_hits[m.trailing_zeros() as usize].add(w);
                m &= m - 1;
            }
        }
    }

    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    fn merge(mut self, other: Accum) -> Accum {
        self.weight.absorb(other.weight);
        self.e_s1.absorb(other.e_s1);
        self.e_s1_sq.absorb(other.e_s1_sq);
        self.e_s2.absorb(other.e_s2);
        self.e_s2_sq.absorb(other.e_s2_sq);
        self.p_dd.absorb(other.p_dd);
        self.p_sd.absorb(other.p_sd);
        self.p_bal.absorb(other.p_bal);
        for (a, b) in self.sum_hits.iter_mut().zip(&other.sum_hits) {
            a.absorb(*b);
        }
        for (a, b) in self.diff_hits.iter_mut().zip(&other.diff_hits) {
            a.absorb(*b);
        }
        self
    }

    fn finish(self, params: ModelParams) -> ExactLaw {
        let weight = self.weight.value();
        debug_assert!((weight - 1.0).abs() < 1e-10, "weights sum to 1: {weight}");
        let e_s1 = self.e_s1.value();
        let e_s2 = self.e_s2.value();
        ExactLaw {
            params,
            p_sum_hit_by_index: self.sum_hits.iter().map(|k| k.value()).collect(),
            p_diff_hit_by_index: self.diff_hits.iter().map(|k| k.value()).collect(),
            e_s1,
            e_s2,
            // Tiny negatives are roundoff; the laws are honest variances.
            var_s1: (self.e_s1_sq.value() - e_s1 * e_s1).max(0.0),
            var_s2: (self.e_s2_sq.value() - e_s2 * e_s2).max(0.0),
            p_diff_dominant: self.p_dd.value(),
            p_sum_dominant: self.p_sd.value(),
            p_balanced: self.p_bal.value(),
        }
    }
}

fn check_capacity(n: usize, max: usize) -> Result<()> {
    if n > max {
        return Err(Error::CapacityExceeded { n, max });
    }
    Ok(())
}

/// Exact law by full enumeration, single-threaded.
pub fn exact_law_seq(params: &ModelParams) -> Result<ExactLaw> {
    let n = params.n();
    check_capacity(n, LAW_CAPACITY)?;
    let weights = cardinality_weights(n, params.p());
    let mut acc = Accum::new(n);
    acc.add_range(0, 1u64 << n, n, &weights);
    Ok(acc.finish(*params))
}

/// Exact law by full enumeration; fans the mask range out over the
/// current rayon pool when the `parallel` feature is on.
///
/// Worker counts only reorder floating-point merges, so any two runs
/// agree to well under 10⁻¹² per field.
pub fn exact_law(params: &ModelParams) -> Result<ExactLaw> {
    #[cfg(feature = "parallel")]
    {
        let n = params.n();
        check_capacity(n, LAW_CAPACITY)?;
        let total = 1u64 << n;
        // Chunk size is fixed by n, not by worker count.
        const CHUNK: u64 = 1 << 14;
        if total <= CHUNK {
            return exact_law_seq(params);
        }
        let weights = cardinality_weights(n, params.p());
        let starts: Vec<u64> = (0..total).step_by(CHUNK as usize).collect();
        let acc = starts
            .into_par_iter()
            .map(|lo| {
                let mut acc = Accum::new(n);
                acc.add_range(lo, (lo + CHUNK).min(total), n, &weights);
                acc
            })
            .reduce_with(Accum::merge)
            .expect("at least one chunk");
        Ok(acc.finish(*params))
    }
    #[cfg(not(feature = "parallel"))]
    {
        exact_law_seq(params)
    }
}

/// Bit position of the indicator for `index` in the family's mask.
fn hit_bit(index: i64, family: HitFamily, n: usize) -> Result<u32> {
    let (lo, hi) = match family {
        HitFamily::Sum => (0, 2 * n as i64 - 2),
        HitFamily::Diff => (-(n as i64 - 1), n as i64 - 1),
    };
    if index < lo || index > hi {
        return Err(Error::IndexOutOfRange { index, lo, hi });
    }
    Ok((index - lo) as u32)
}

/// Exact `Cov(ζᵢ, ζₖ)` for two hit indicators of the same family, by
/// weighted enumeration. Symmetric in `(i, k)`; `i = k` gives the
/// indicator variance.
pub fn exact_cov(i: i64, k: i64, family: HitFamily, params: &ModelParams) -> Result<f64> {
    let n = params.n();
    check_capacity(n, COV_CAPACITY)?;
    let bi = hit_bit(i, family, n)?;
    let bk = hit_bit(k, family, n)?;
    let weights = cardinality_weights(n, params.p());
    let mut p_i = Kahan::default();
    let mut p_k = Kahan::default();
    let mut p_both = Kahan::default();
    for mask in 0u64..(1 << n) {
        let mask = mask as u32;
        let w = weights[mask.count_ones() as usize];
        let (sum, diff) = pair_masks(mask, n);
        let fam = match family {
            HitFamily::Sum => sum,
            HitFamily::Diff => diff,
        };
        let hit_i = fam >> bi & 1 == 1;
        let hit_k = fam >> bk & 1 == 1;
        if hit_i {
            p_i.add(w);
        }
        if hit_k {
            p_k.add(w);
        }
        if hit_i && hit_k {
            p_both.add(w);
        }
    }
    Ok(p_both.value() - p_i.value() * p_k.value())
}
