//! Error type shared across the crate.

/// Errors reported by set construction, probability laws, and experiment drivers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An element lies outside the fixed universe `[0, n)`.
    #[error("element {element} outside universe [0, {universe})")]
    ElementOutOfRange { element: usize, universe: usize },

    /// The universe must contain at least one index.
    #[error("universe size must be at least 1")]
    EmptyUniverse,

    /// An index is outside the valid range for the requested quantity.
    #[error("index {index} outside valid range [{lo}, {hi}]")]
    IndexOutOfRange { index: i64, lo: i64, hi: i64 },

    /// Pairwise bounds require strictly ordered indices.
    #[error("index pair ({i}, {k}) must satisfy i < k")]
    UnorderedIndexPair { i: i64, k: i64 },

    /// A probability parameter fell outside its admissible interval.
    #[error("probability {value} outside {interval}")]
    InvalidProbability { value: f64, interval: &'static str },

    /// The operation is undefined for the empty set.
    #[error("operation undefined for the empty set")]
    EmptySet,

    /// Exhaustive enumeration refuses universes past its capacity.
    #[error("universe size {n} exceeds enumeration capacity {max}")]
    CapacityExceeded { n: usize, max: usize },

    /// A sweep grid was empty or not strictly ascending.
    #[error("invalid sweep grid: {reason}")]
    InvalidGrid { reason: &'static str },

    /// A density schedule had a non-positive coefficient or an exponent
    /// outside (0, 1).
    #[error("invalid density schedule: {reason}")]
    InvalidSchedule { reason: &'static str },
}

impl Error {
    /// True for capacity overruns, which callers may want to map to a
    /// distinct exit status.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::CapacityExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
