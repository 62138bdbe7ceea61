//! Detectors for the `1+1=2, 1+1=2, 2+2=1+3` block pattern in move logs.
//!
//! When such a block appears, the middle player could have played `1+2=3`
//! instead, which shifts who makes the final move. The detectors only look
//! at concrete move sequences.

use crate::engine::Move;
use crate::error::{Error, Result};

/// Every `j` with `moves[j..j + 3] == [c1, c1, s2]`.
pub fn detect_steal_pattern(moves: &[Move]) -> Vec<usize> {
    detect_blocks(moves, 1)
}

/// Every `j` where `moves[j..j + 3k]` is `k` combines of ones, `k` more
/// combines of ones, then `k` splits of twos.
pub fn detect_steal_pattern_k(moves: &[Move], k: usize) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::invalid("block length k must be at least 1"));
    }
    Ok(detect_blocks(moves, k))
}

fn detect_blocks(moves: &[Move], k: usize) -> Vec<usize> {
    let len = 3 * k;
    if moves.len() < len {
        return Vec::new();
    }
    // Length of the run of equal moves starting at each position.
    let mut run_ones = vec![0usize; moves.len() + 1];
    let mut run_twos = vec![0usize; moves.len() + 1];
    for j in (0..moves.len()).rev() {
        run_ones[j] = if moves[j] == Move::CombineOnes { run_ones[j + 1] + 1 } else { 0 };
        run_twos[j] = if moves[j] == Move::SplitTwos { run_twos[j + 1] + 1 } else { 0 };
    }
    (0..=moves.len() - len)
        .filter(|&j| run_ones[j] >= 2 * k && run_twos[j + 2 * k] >= k)
        .collect()
}
