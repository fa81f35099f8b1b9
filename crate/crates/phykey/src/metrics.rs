//! Key mismatch rate and key generation rate.

use crate::error::{Error, Result};
use crate::keygen::BitString;

/// Outcome of comparing two keys bit by bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyComparison {
    pub matched: usize,
    pub total: usize,
    /// Mismatch fraction in `[0,1]`.
    pub kmr: f64,
}

/// Key mismatch rate: Hamming distance over length.
///
/// Keys of unequal length (one node skipped a degenerate subblock the other
/// kept) count as a full-length mismatch, `kmr = 1`.
pub fn kmr(a: &BitString, b: &BitString) -> Result<KeyComparison> {
    if a.algorithm() != b.algorithm() {
        return Err(Error::invalid(format!(
            "cannot compare {} key against {} key",
            a.algorithm(),
            b.algorithm()
        )));
    }
    if a.is_empty() && b.is_empty() {
        return Err(Error::EmptyKey);
    }
    if a.len() != b.len() {
        let total = a.len().max(b.len());
        return Ok(KeyComparison {
            matched: 0,
            total,
            kmr: 1.0,
        });
    }
    let matched = a
        .bits()
        .iter()
        .zip(b.bits())
        .filter(|(x, y)| x == y)
        .count();
    let total = a.len();
    Ok(KeyComparison {
        matched,
        total,
        kmr: (total - matched) as f64 / total as f64,
    })
}

/// Key generation rate in bits per channel coefficient.
///
/// The raw rate is `key length / N`; when a comparison against the peer is
/// available the effective rate discounts by the agreement fraction,
/// `raw · (1 - kmr)`.
pub fn kgr(key: &BitString, n_coefficients: usize, comparison: Option<&KeyComparison>) -> f64 {
    let raw = key.len() as f64 / n_coefficients as f64;
    match comparison {
        Some(c) => raw * (1.0 - c.kmr),
        None => raw,
    }
}
