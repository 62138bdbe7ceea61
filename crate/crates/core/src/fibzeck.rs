//! Fibonacci numbers with the shifted indexing `F_1 = 1, F_2 = 2` and
//! Zeckendorf decompositions.
//!
//! With this indexing every positive integer has exactly one representation
//! as a sum of distinct, non-adjacent Fibonacci numbers. The classic `1, 1, 2`
//! indexing is never used in this crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest accepted game size / decomposition input.
pub const MAX_N: u64 = 1_000_000_000;

/// Largest `i` for which `F_i` fits in a `u64`.
pub const MAX_FIB_INDEX: u32 = 92;

const FIB_TABLE: [u64; MAX_FIB_INDEX as usize] = {
    let mut table = [0u64; MAX_FIB_INDEX as usize];
    table[0] = 1;
    table[1] = 2;
    let mut i = 2;
    while i < MAX_FIB_INDEX as usize {
        table[i] = table[i - 1] + table[i - 2];
        i += 1;
    }
    table
};

/// 1-based index into the shifted Fibonacci sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct FibIndex(u32);

impl FibIndex {
    pub fn new(i: u32) -> Result<Self> {
        if i == 0 {
            return Err(Error::invalid("Fibonacci index must be at least 1"));
        }
        Ok(FibIndex(i))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn value(self) -> Result<u64> {
        fib_value(self.0)
    }
}

impl TryFrom<u32> for FibIndex {
    type Error = Error;

    fn try_from(i: u32) -> Result<Self> {
        FibIndex::new(i)
    }
}

impl From<FibIndex> for u32 {
    fn from(i: FibIndex) -> u32 {
        i.0
    }
}

/// `F_i` under the shifted indexing.
pub fn fib_value(i: u32) -> Result<u64> {
    match i {
        0 => Err(Error::invalid("Fibonacci index must be at least 1")),
        i if i > MAX_FIB_INDEX => Err(Error::Overflow { index: i }),
        i => Ok(FIB_TABLE[i as usize - 1]),
    }
}

/// Rejects `n = 0` and anything above [`MAX_N`].
pub fn validate_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if n > MAX_N {
        return Err(Error::invalid(format!("n must be at most {MAX_N}")));
    }
    Ok(())
}

/// Largest `i` with `F_i <= n`.
pub fn max_index(n: u64) -> Result<u32> {
    validate_n(n)?;
    // FIB_TABLE[0] = 1 <= n, so the partition point is at least 1.
    Ok(FIB_TABLE.partition_point(|&f| f <= n) as u32)
}

/// A set of Fibonacci indices, strictly increasing, no two adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decomposition {
    indices: Vec<FibIndex>,
}

impl Decomposition {
    /// Checks distinctness and non-adjacency.
    pub fn from_indices(mut indices: Vec<FibIndex>) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[1].0 - w[0].0 < 2) {
            return Err(Error::invalid(
                "decomposition indices must be distinct and non-adjacent",
            ));
        }
        Ok(Decomposition { indices })
    }

    pub fn indices(&self) -> &[FibIndex] {
        &self.indices
    }

    pub fn values(&self) -> Vec<u64> {
        self.indices
            .iter()
            .map(|i| FIB_TABLE[i.0 as usize - 1])
            .collect()
    }

    pub fn sum(&self) -> u64 {
        self.values().iter().sum()
    }

    /// Counts array (position 0 holds the multiplicity of `F_1`), with
    /// `len` entries.
    pub fn to_counts(&self, len: usize) -> Vec<u32> {
        let mut counts = vec![0; len];
        for i in &self.indices {
            counts[i.0 as usize - 1] = 1;
        }
        counts
    }
}

/// Greedy largest-first Zeckendorf decomposition of `n`.
pub fn zeckendorf(n: u64) -> Result<Decomposition> {
    let mut i = max_index(n)?;
    let mut rest = n;
    let mut indices = Vec::new();
    while rest > 0 {
        while FIB_TABLE[i as usize - 1] > rest {
            i -= 1;
        }
        rest -= FIB_TABLE[i as usize - 1];
        indices.push(FibIndex(i));
        // The next part is strictly below F_{i-1}.
        i = i.saturating_sub(2).max(1);
    }
    indices.reverse();
    Ok(Decomposition { indices })
}

/// True iff every count is at most 1 and no two adjacent indices are both
/// present. Position 0 holds the multiplicity of `F_1`.
pub fn is_zeckendorf(counts: &[u32]) -> bool {
    counts.iter().all(|&c| c <= 1) && counts.windows(2).all(|w| w[0] + w[1] <= 1)
}
