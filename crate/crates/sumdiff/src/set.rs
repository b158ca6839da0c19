//! Finite integer-set arithmetic over a fixed universe `[0, n)`.
//!
//! Sets are bitmask-backed. The sumset is computed by OR-ing the mask
//! shifted by each member; the difference set by the same trick on the
//! reversed mask. Both cost `O(k * n / 64)` words of work for a k-element
//! set, which keeps the per-trial cost of the Monte Carlo loops low.

use std::fmt;

use crate::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// OR `src << shift` into `dst`.
///
/// The caller guarantees `dst` can hold every shifted bit; unused high bits
/// of `src`'s last word must be zero.
#[inline]
fn or_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let word_shift = shift / WORD_BITS;
    let bit_shift = shift % WORD_BITS;
    if bit_shift == 0 {
        for (i, &w) in src.iter().enumerate() {
            if w != 0 {
                dst[i + word_shift] |= w;
            }
        }
    } else {
        let carry_shift = WORD_BITS - bit_shift;
        for (i, &w) in src.iter().enumerate() {
            if w == 0 {
                continue;
            }
            dst[i + word_shift] |= w << bit_shift;
            let carry = w >> carry_shift;
            if carry != 0 {
                dst[i + word_shift + 1] |= carry;
            }
        }
    }
}

fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

/// Iterator over set bit positions of a word slice, ascending.
struct Bits<'a> {
    words: &'a [u64],
    word_index: usize,
    current: u64,
}

impl<'a> Bits<'a> {
    fn new(words: &'a [u64]) -> Self {
        Bits {
            words,
            word_index: 0,
            current: words.first().copied().unwrap_or(0),
        }
    }
}

impl Iterator for Bits<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.word_index += 1;
            if self.word_index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_index];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.word_index * WORD_BITS + bit)
    }
}

/// Three-way comparison of |A−A| against |A+A|.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dominance {
    /// |A−A| > |A+A|
    DifferenceDominant,
    /// |A−A| < |A+A|
    SumDominant,
    /// |A−A| = |A+A| (includes the empty set, 0 = 0)
    Balanced,
}

impl Dominance {
    /// Classify from the two set sizes.
    pub fn from_sizes(sumset_size: usize, diffset_size: usize) -> Self {
        match diffset_size.cmp(&sumset_size) {
            std::cmp::Ordering::Greater => Dominance::DifferenceDominant,
            std::cmp::Ordering::Less => Dominance::SumDominant,
            std::cmp::Ordering::Equal => Dominance::Balanced,
        }
    }
}

impl fmt::Display for Dominance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Dominance::DifferenceDominant => "difference-dominant",
            Dominance::SumDominant => "sum-dominant",
            Dominance::Balanced => "balanced",
        };
        f.write_str(s)
    }
}

/// A finite subset of `[0, n)` over a fixed universe of size `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSet {
    universe: usize,
    words: Vec<u64>,
}

impl IntSet {
    /// The empty set over a universe of `universe_size` indices.
    pub fn empty(universe_size: usize) -> Result<Self> {
        if universe_size == 0 {
            return Err(Error::EmptyUniverse);
        }
        Ok(Self::with_universe(universe_size))
    }

    /// Builds the set of distinct `elements`; duplicates collapse.
    pub fn from_elements(elements: &[usize], universe_size: usize) -> Result<Self> {
        let mut set = Self::empty(universe_size)?;
        for &e in elements {
            if e >= universe_size {
                return Err(Error::ElementOutOfRange {
                    element: e,
                    universe: universe_size,
                });
            }
            set.insert(e);
        }
        Ok(set)
    }

    pub(crate) fn with_universe(universe: usize) -> Self {
        debug_assert!(universe > 0);
        IntSet {
            universe,
            words: vec![0; words_for(universe)],
        }
    }

    /// Clears the set and re-sizes it to a (possibly different) universe.
    pub(crate) fn reset(&mut self, universe: usize) {
        debug_assert!(universe > 0);
        self.universe = universe;
        self.words.clear();
        self.words.resize(words_for(universe), 0);
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    /// Cardinality (popcount of the bitmask).
    pub fn len(&self) -> usize {
        popcount(&self.words)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, element: usize) -> bool {
        element < self.universe && self.words[element / WORD_BITS] >> (element % WORD_BITS) & 1 == 1
    }

    /// Inserts an element. Panics if it lies outside the universe.
    pub fn insert(&mut self, element: usize) {
        assert!(
            element < self.universe,
            "element {element} outside universe [0, {})",
            self.universe
        );
        self.words[element / WORD_BITS] |= 1 << (element % WORD_BITS);
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        Bits::new(&self.words)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// The sumset `{a + b : a, b ∈ A}` over the universe `[0, 2n−1)`;
    /// self-sums `a + a` included.
    pub fn sumset(&self) -> IntSet {
        let mut out = IntSet::with_universe(2 * self.universe - 1);
        self.sumset_into(&mut out);
        out
    }

    /// In-place variant of [`sumset`](Self::sumset); `out` is cleared and
    /// resized, reusing its allocation.
    pub fn sumset_into(&self, out: &mut IntSet) {
        out.reset(2 * self.universe - 1);
        for a in Bits::new(&self.words) {
            or_shifted(&mut out.words, &self.words, a);
        }
    }

    /// The difference set `{a − b : a, b ∈ A}` over `[−(n−1), n−1]`.
    pub fn diffset(&self) -> SignedRangeSet {
        let mut out = SignedRangeSet::with_half_range(self.universe - 1);
        self.diffset_into(&mut out);
        out
    }

    /// In-place variant of [`diffset`](Self::diffset).
    pub fn diffset_into(&self, out: &mut SignedRangeSet) {
        let half = self.universe - 1;
        out.reset(half);
        // a − b, offset by n−1, is the mask shifted by n−1−b.
        for b in Bits::new(&self.words) {
            or_shifted(&mut out.words, &self.words, half - b);
        }
    }

    /// Compares |A−A| with |A+A|. The empty set is balanced (0 = 0).
    pub fn classify(&self) -> Dominance {
        Dominance::from_sizes(self.sumset().len(), self.diffset().len())
    }

    /// Number of ordered quadruples `(x, y, u, v) ∈ A⁴` with `x+y = u+v`.
    pub fn additive_energy(&self) -> u64 {
        let members = self.to_vec();
        let mut counts = vec![0u32; 2 * self.universe - 1];
        for &x in &members {
            for &y in &members {
                counts[x + y] += 1;
            }
        }
        counts.iter().map(|&c| u64::from(c) * u64::from(c)).sum()
    }

    /// Number of ordered quadruples with `x−y = u−v`; always equals
    /// [`additive_energy`](Self::additive_energy) via `(x,y,u,v) ↦ (x,v,u,y)`.
    pub fn diff_energy(&self) -> u64 {
        let members = self.to_vec();
        let offset = self.universe - 1;
        let mut counts = vec![0u32; 2 * self.universe - 1];
        for &x in &members {
            for &y in &members {
                counts[x + offset - y] += 1;
            }
        }
        counts.iter().map(|&c| u64::from(c) * u64::from(c)).sum()
    }

    /// Difference-energy quadruples beyond the `2k² − k` trivial ones
    /// (`(x,y) = (u,v)`, or `x = y` and `u = v`).
    pub fn nontrivial_collisions(&self) -> u64 {
        let k = self.len() as u64;
        self.diff_energy() - (2 * k * k - k)
    }

    /// Collision-corrected lower bound on |A−A|: `k(k−1) + 1` minus the
    /// nontrivial collision count (the `+1` accounts for the difference 0).
    /// May be negative for collision-heavy sets; |A−A| ≥ the bound always.
    pub fn diff_lower_bound(&self) -> Result<i64> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        let k = self.len() as i64;
        Ok(k * (k - 1) + 1 - self.nontrivial_collisions() as i64)
    }

    /// True iff all pairwise sums `a + b` with `a ≤ b` are distinct;
    /// equivalently the additive energy attains its minimum `2k² − k`.
    pub fn is_sidon(&self) -> bool {
        let members = self.to_vec();
        let mut seen = vec![0u64; words_for(2 * self.universe - 1)];
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i..] {
                let s = a + b;
                let mask = 1u64 << (s % WORD_BITS);
                if seen[s / WORD_BITS] & mask != 0 {
                    return false;
                }
                seen[s / WORD_BITS] |= mask;
            }
        }
        true
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

/// A set of signed values in `[−h, h]`, bit `d + h` for value `d`.
///
/// Produced by [`IntSet::diffset`], in which case it is symmetric about 0
/// and, for a nonempty source, contains 0 (hence has odd cardinality).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedRangeSet {
    half_range: usize,
    words: Vec<u64>,
}

impl SignedRangeSet {
    pub(crate) fn with_half_range(half_range: usize) -> Self {
        SignedRangeSet {
            half_range,
            words: vec![0; words_for(2 * half_range + 1)],
        }
    }

    pub(crate) fn reset(&mut self, half_range: usize) {
        self.half_range = half_range;
        self.words.clear();
        self.words.resize(words_for(2 * half_range + 1), 0);
    }

    pub fn half_range(&self) -> usize {
        self.half_range
    }

    pub fn len(&self) -> usize {
        popcount(&self.words)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, value: i64) -> bool {
        let h = self.half_range as i64;
        if value < -h || value > h {
            return false;
        }
        let idx = (value + h) as usize;
        self.words[idx / WORD_BITS] >> (idx % WORD_BITS) & 1 == 1
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        let h = self.half_range as i64;
        Bits::new(&self.words).map(move |idx| idx as i64 - h)
    }

    pub fn to_vec(&self) -> Vec<i64> {
        self.iter().collect()
    }
}

impl fmt::Display for SignedRangeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}
