//! Zero-sum predicates and witness extraction.
//!
//! All three predicates reduce to one subsum-table pass: a sequence is
//! zero-sum free iff `0` misses every positive layer, and minimal zero-sum
//! iff `0` appears in layer `|S|` only.

use crate::sequence::Sequence;
use crate::Result;

/// A nonempty zero-sum subsequence of some queried sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroSumWitness {
    pub subsequence: Sequence,
}

/// `σ(S) = 0` (true for the empty sequence).
pub fn is_zero_sum(s: &Sequence) -> bool {
    s.sum() == s.spec().zero()
}

/// `0 ∉ Σ(S)`: no nonempty subsequence sums to zero.
pub fn is_zero_sum_free(s: &Sequence) -> Result<bool> {
    if s.is_empty() {
        return Ok(true);
    }
    let table = s.subsums()?;
    Ok(!table.zero_in_lengths(1, s.len()))
}

/// Nonempty, zero-sum, and no proper nonempty zero-sum subsequence.
/// Equivalently: `0 ∈ Σ_k(S)` exactly at `k = |S|`.
pub fn is_minimal_zero_sum(s: &Sequence) -> Result<bool> {
    if s.is_empty() || !is_zero_sum(s) {
        return Ok(false);
    }
    let table = s.subsums()?;
    Ok(!table.zero_in_lengths(1, s.len() - 1))
}

/// Lexicographically least zero-sum subsequence whose length lies in
/// `[lo, hi]` (compared as sorted index words), or `None`.
///
/// Enumerates multiplicity vectors directly — the multiset subsequence count
/// `∏ (v_g + 1)` is small at every desk scale this crate targets.
pub fn find_zero_sum_subsequence(
    s: &Sequence,
    lo: usize,
    hi: usize,
) -> Result<Option<ZeroSumWitness>> {
    let spec = s.spec();
    let counts: Vec<_> = s.counts().collect();
    let mut choice = vec![0u32; counts.len()];
    let mut best: Option<(Vec<usize>, Sequence)> = None;
    loop {
        let len: usize = choice.iter().map(|&c| c as usize).sum();
        if len >= lo.max(1) && len <= hi {
            let mut cand = Sequence::empty(spec);
            for ((g, _), &c) in counts.iter().zip(&choice) {
                cand.push(*g, c);
            }
            if is_zero_sum(&cand) {
                let word = cand.sorted_indices();
                if best.as_ref().map_or(true, |(w, _)| word < *w) {
                    best = Some((word, cand));
                }
            }
        }
        // odometer over multiplicity vectors
        let mut i = 0;
        loop {
            if i == counts.len() {
                return Ok(best.map(|(_, subsequence)| ZeroSumWitness { subsequence }));
            }
            choice[i] += 1;
            if choice[i] <= counts[i].1 {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}
