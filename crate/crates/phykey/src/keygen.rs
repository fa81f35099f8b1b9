//! Secret key extraction from an observed channel frequency response.
//!
//! All five extractors share the same front end: the gain vector is permuted
//! by a public random interleaver (both nodes hold the same seed, so deep
//! fades spread uniformly over the block), magnitudes are taken, and the
//! block is sliced into `G = N/n` subblocks. They differ in what they
//! quantize:
//!
//! * **NIKG** — the *number* and *positions* of subcarriers whose magnitude
//!   strictly exceeds the subblock mean, coded through a fixed 14-entry
//!   codebook for `n = 4` (two 2-bit words `k1‖k2` per subblock).
//! * **NIAKG** — NIKG plus one amplitude bit per subcarrier (above/below the
//!   subblock mean), appended after all the subblock codes.
//! * **CKG** — one bit per subcarrier against the *global* mean magnitude.
//! * **IKG** — the in-subblock index of the strongest subcarrier, `log2(n)`
//!   bits per subblock.
//! * **JKG** — IKG plus the per-subcarrier amplitude bits.
//!
//! Subblocks where no magnitude strictly exceeds the mean (all equal) have
//! no codebook entry and are skipped; both nodes detect this locally. All
//! comparisons use strict `>`, so the outputs are invariant under positive
//! scaling of the gain vector.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::Cfr;
use crate::error::{Error, Result};

/// Key extraction algorithm identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Nikg,
    Niakg,
    Ckg,
    Ikg,
    Jkg,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Nikg,
        Algorithm::Niakg,
        Algorithm::Ckg,
        Algorithm::Ikg,
        Algorithm::Jkg,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Nikg => "nikg",
            Algorithm::Niakg => "niakg",
            Algorithm::Ckg => "ckg",
            Algorithm::Ikg => "ikg",
            Algorithm::Jkg => "jkg",
        }
    }

    /// Run this extractor on an observed response.
    pub fn extract(
        &self,
        cfr: &Cfr,
        ilv: &Interleaver,
        part: &SubblockPartition,
    ) -> Result<BitString> {
        match self {
            Algorithm::Nikg => nikg(cfr, ilv, part),
            Algorithm::Niakg => niakg(cfr, ilv, part),
            Algorithm::Ckg => ckg(cfr, ilv),
            Algorithm::Ikg => ikg(cfr, ilv, part),
            Algorithm::Jkg => jkg(cfr, ilv, part),
        }
    }

    /// Nominal key length for a partition of `g` subblocks of size `n`
    /// (no degenerate subblocks).
    pub fn nominal_bits(&self, part: &SubblockPartition) -> usize {
        let n_total = part.n * part.g;
        match self {
            Algorithm::Nikg => nikg_nominal_bits(part),
            Algorithm::Niakg => nikg_nominal_bits(part) + n_total,
            Algorithm::Ckg => n_total,
            Algorithm::Ikg => part.g * log2_usize(part.n),
            Algorithm::Jkg => part.g * log2_usize(part.n) + n_total,
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nikg" => Ok(Algorithm::Nikg),
            "niakg" => Ok(Algorithm::Niakg),
            "ckg" => Ok(Algorithm::Ckg),
            "ikg" => Ok(Algorithm::Ikg),
            "jkg" => Ok(Algorithm::Jkg),
            other => Err(Error::invalid(format!("unknown algorithm '{other}'"))),
        }
    }
}

/// An ordered sequence of key bits with algorithm provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitString {
    bits: Vec<u8>,
    algorithm: Algorithm,
}

impl BitString {
    pub fn new(bits: Vec<u8>, algorithm: Algorithm) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Self { bits, algorithm }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    /// ASCII '0'/'1' rendering, one character per bit.
    pub fn to_ascii(&self) -> String {
        self.bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
    }

    pub fn from_ascii(s: &str, algorithm: Algorithm) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                other => Err(Error::invalid(format!("invalid bit character '{other}'"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self { bits, algorithm })
    }
}

/// Public shared permutation of the subcarrier indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interleaver {
    perm: Vec<usize>,
    pub seed: u64,
}

impl Interleaver {
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// The identity permutation (useful for tests and direct quantization).
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            seed: 0,
        }
    }

    /// The inverse permutation as a new interleaver.
    pub fn invert(&self) -> Self {
        let mut inv = vec![0usize; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        Self {
            perm: inv,
            seed: self.seed,
        }
    }
}

/// Uniformly random permutation of `{0..n-1}` fully determined by the seed.
/// The seed is public: both legitimate nodes (and the eavesdropper) use the
/// same one; secrecy comes from the channel, not from the permutation.
pub fn make_interleaver(n: usize, seed: u64) -> Result<Interleaver> {
    if n < 2 {
        return Err(Error::invalid("interleaver needs at least two subcarriers"));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    // Fisher-Yates against a fixed stream so the layout never depends on
    // library shuffle internals.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    Ok(Interleaver { perm, seed })
}

/// Permute the gain vector: `out[i] = gains[perm[i]]`.
pub fn apply_interleaver(cfr: &Cfr, ilv: &Interleaver) -> Result<Vec<Complex64>> {
    if cfr.gains.len() != ilv.len() {
        return Err(Error::invalid(format!(
            "interleaver length {} does not match {} subcarriers",
            ilv.len(),
            cfr.gains.len()
        )));
    }
    Ok(ilv.perm.iter().map(|&p| cfr.gains[p]).collect())
}

/// Division of `N` subcarriers into `g` subblocks of `n` each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubblockPartition {
    pub n: usize,
    pub g: usize,
}

impl SubblockPartition {
    /// Partition `n_subcarriers` into subblocks of size `subblock_size`.
    pub fn new(n_subcarriers: usize, subblock_size: usize) -> Result<Self> {
        if subblock_size < 2 {
            return Err(Error::invalid("subblock size must be at least 2"));
        }
        if n_subcarriers == 0 || !n_subcarriers.is_multiple_of(subblock_size) {
            return Err(Error::invalid(format!(
                "subblock size {subblock_size} does not divide {n_subcarriers} subcarriers"
            )));
        }
        Ok(Self {
            n: subblock_size,
            g: n_subcarriers / subblock_size,
        })
    }

    pub fn total(&self) -> usize {
        self.n * self.g
    }
}

/// Above-mean position pattern of one subblock.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AboveMeanPattern {
    /// In-subblock indices whose magnitude strictly exceeds the mean, ascending.
    pub positions: Vec<usize>,
    pub count: usize,
}

/// A pattern together with its codebook words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternCode {
    pub positions: Vec<usize>,
    pub count: usize,
    pub k1: [u8; 2],
    pub k2: [u8; 2],
}

impl PatternCode {
    /// The four code bits in transmission order, `k1` then `k2`, MSB first.
    pub fn bits(&self) -> [u8; 4] {
        [self.k1[0], self.k1[1], self.k2[0], self.k2[1]]
    }
}

/// Mean of the magnitudes of one subblock.
pub fn subblock_mean(subblock: &[Complex64]) -> f64 {
    mean_of(&subblock.iter().map(|g| g.norm()).collect::<Vec<_>>())
}

fn mean_of(mags: &[f64]) -> f64 {
    mags.iter().sum::<f64>() / mags.len() as f64
}

/// Positions (strictly) above the subblock mean, plus their count.
///
/// With strict inequality a full count of `n` is impossible: the maximum
/// cannot strictly exceed a mean it dominates unless some element falls
/// below. Count zero occurs only when all magnitudes are equal.
pub fn above_mean_pattern(subblock: &[Complex64]) -> AboveMeanPattern {
    let mags: Vec<f64> = subblock.iter().map(|g| g.norm()).collect();
    pattern_of(&mags)
}

fn pattern_of(mags: &[f64]) -> AboveMeanPattern {
    let av = mean_of(mags);
    let positions: Vec<usize> = mags
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > av)
        .map(|(j, _)| j)
        .collect();
    AboveMeanPattern {
        count: positions.len(),
        positions,
    }
}

/// The 14-entry `n = 4` codebook: position set → `k1‖k2`, indexed by the
/// position bitmask (bit `j` set ⇔ subcarrier `j` above the mean). Listed in
/// codebook row order. The codes 0000 and 1111 are unused.
const CODEBOOK_N4: [(u8, [u8; 4]); 14] = [
    (0b0001, [0, 0, 0, 1]), // {0}
    (0b0010, [0, 0, 1, 0]), // {1}
    (0b0100, [0, 0, 1, 1]), // {2}
    (0b1000, [1, 1, 0, 0]), // {3}
    (0b0011, [0, 1, 0, 0]), // {0,1}
    (0b0101, [0, 1, 0, 1]), // {0,2}
    (0b1001, [0, 1, 1, 0]), // {0,3}
    (0b1010, [0, 1, 1, 1]), // {1,3}
    (0b0111, [1, 0, 0, 0]), // {0,1,2}
    (0b1101, [1, 0, 0, 1]), // {0,2,3}
    (0b1011, [1, 0, 1, 0]), // {0,1,3}
    (0b1110, [1, 0, 1, 1]), // {1,2,3}
    (0b1100, [1, 1, 0, 1]), // {2,3}
    (0b0110, [1, 1, 1, 0]), // {1,2}
];

fn position_mask(positions: &[usize]) -> Result<u8> {
    let mut mask = 0u8;
    for &p in positions {
        if p > 3 {
            return Err(Error::invalid(format!("position {p} out of range for n=4")));
        }
        mask |= 1 << p;
    }
    Ok(mask)
}

/// Encode one `n = 4` above-mean pattern through the codebook.
pub fn encode_pattern_n4(positions: &[usize], count: usize) -> Result<PatternCode> {
    if count == 0 || count >= 4 {
        return Err(Error::DegeneratePattern(count, 4));
    }
    if positions.len() != count {
        return Err(Error::invalid("position count mismatch"));
    }
    let mask = position_mask(positions)?;
    let (_, code) = CODEBOOK_N4
        .iter()
        .find(|(m, _)| *m == mask)
        .expect("every nonempty, nonfull 4-bit mask has a codebook row");
    Ok(PatternCode {
        positions: positions.to_vec(),
        count,
        k1: [code[0], code[1]],
        k2: [code[2], code[3]],
    })
}

/// Invert the codebook: 4 code bits back to the position set (ascending).
/// Returns `None` for the two unused codes 0000 and 1111.
pub fn decode_pattern_n4(bits: [u8; 4]) -> Option<Vec<usize>> {
    let (mask, _) = CODEBOOK_N4.iter().find(|(_, c)| *c == bits)?;
    Some((0..4).filter(|j| mask & (1 << j) != 0).collect())
}

fn log2_usize(n: usize) -> usize {
    debug_assert!(n.is_power_of_two());
    n.trailing_zeros() as usize
}

/// Nominal NIKG key length: `G·(⌊log2 C(n,1)⌋ + log2 n)` bits.
pub fn nikg_nominal_bits(part: &SubblockPartition) -> usize {
    part.g * (floor_log2(part.n) + log2_usize(part.n))
}

fn floor_log2(v: usize) -> usize {
    (usize::BITS - 1 - v.leading_zeros()) as usize
}

fn push_bits(out: &mut Vec<u8>, value: usize, width: usize) {
    for i in (0..width).rev() {
        out.push(((value >> i) & 1) as u8);
    }
}

fn require_layout(cfr: &Cfr, ilv: &Interleaver, part: &SubblockPartition) -> Result<()> {
    if cfr.gains.len() != part.total() || ilv.len() != part.total() {
        return Err(Error::invalid(format!(
            "layout mismatch: {} gains, {}-element interleaver, partition of {}",
            cfr.gains.len(),
            ilv.len(),
            part.total()
        )));
    }
    if !part.n.is_power_of_two() {
        return Err(Error::invalid("subblock size must be a power of two"));
    }
    Ok(())
}

/// Number-and-indices key generation. For `n = 4` each non-degenerate
/// subblock contributes its codebook word `k1‖k2`; for larger power-of-two
/// `n` the fallback encoding is `k1 = (m-1) mod 2^⌊log2 n⌋` in `⌊log2 n⌋`
/// bits followed by `k2` = index of the first above-mean subcarrier in
/// `log2 n` bits, which matches the published per-subblock bit count.
/// Degenerate subblocks contribute nothing.
pub fn nikg(cfr: &Cfr, ilv: &Interleaver, part: &SubblockPartition) -> Result<BitString> {
    require_layout(cfr, ilv, part)?;
    let permuted = apply_interleaver(cfr, ilv)?;
    let mags: Vec<f64> = permuted.iter().map(|g| g.norm()).collect();
    let mut bits = Vec::with_capacity(nikg_nominal_bits(part));
    for block in mags.chunks(part.n) {
        let pat = pattern_of(block);
        if pat.count == 0 || pat.count == part.n {
            continue;
        }
        if part.n == 4 {
            let code = encode_pattern_n4(&pat.positions, pat.count)?;
            bits.extend_from_slice(&code.bits());
        } else {
            let width = log2_usize(part.n);
            push_bits(&mut bits, (pat.count - 1) % (1 << floor_log2(part.n)), floor_log2(part.n));
            push_bits(&mut bits, pat.positions[0], width);
        }
    }
    Ok(BitString::new(bits, Algorithm::Nikg))
}

/// One amplitude bit per subcarrier of the permuted vector: 1 when the
/// magnitude strictly exceeds its subblock mean, else 0. Always `N` bits.
pub fn amplitude_bits(permuted: &[Complex64], part: &SubblockPartition) -> Result<Vec<u8>> {
    if permuted.len() != part.total() {
        return Err(Error::invalid("partition does not cover the gain vector"));
    }
    let mags: Vec<f64> = permuted.iter().map(|g| g.norm()).collect();
    let mut bits = Vec::with_capacity(mags.len());
    for block in mags.chunks(part.n) {
        let av = mean_of(block);
        bits.extend(block.iter().map(|&m| u8::from(m > av)));
    }
    Ok(bits)
}

/// Number, indices and amplitudes jointly: all NIKG subblock codes in block
/// order, then the `N` amplitude bits in subcarrier order.
pub fn niakg(cfr: &Cfr, ilv: &Interleaver, part: &SubblockPartition) -> Result<BitString> {
    let head = nikg(cfr, ilv, part)?;
    let permuted = apply_interleaver(cfr, ilv)?;
    let tail = amplitude_bits(&permuted, part)?;
    let mut bits = head.bits;
    bits.extend_from_slice(&tail);
    Ok(BitString::new(bits, Algorithm::Niakg))
}

/// Conventional baseline: one bit per subcarrier against the global mean
/// magnitude (strict inequality).
pub fn ckg(cfr: &Cfr, ilv: &Interleaver) -> Result<BitString> {
    let permuted = apply_interleaver(cfr, ilv)?;
    let mags: Vec<f64> = permuted.iter().map(|g| g.norm()).collect();
    let av = mean_of(&mags);
    let bits = mags.iter().map(|&m| u8::from(m > av)).collect();
    Ok(BitString::new(bits, Algorithm::Ckg))
}

/// Indices baseline: the in-subblock index of the strongest subcarrier,
/// `log2 n` bits per subblock (ties resolved to the first maximum).
pub fn ikg(cfr: &Cfr, ilv: &Interleaver, part: &SubblockPartition) -> Result<BitString> {
    require_layout(cfr, ilv, part)?;
    let permuted = apply_interleaver(cfr, ilv)?;
    let mags: Vec<f64> = permuted.iter().map(|g| g.norm()).collect();
    let width = log2_usize(part.n);
    let mut bits = Vec::with_capacity(part.g * width);
    for block in mags.chunks(part.n) {
        let mut best = 0usize;
        for (j, &m) in block.iter().enumerate() {
            if m > block[best] {
                best = j;
            }
        }
        push_bits(&mut bits, best, width);
    }
    Ok(BitString::new(bits, Algorithm::Ikg))
}

/// Joint indices-and-amplitude baseline: IKG bits then the amplitude bits.
pub fn jkg(cfr: &Cfr, ilv: &Interleaver, part: &SubblockPartition) -> Result<BitString> {
    let head = ikg(cfr, ilv, part)?;
    let permuted = apply_interleaver(cfr, ilv)?;
    let tail = amplitude_bits(&permuted, part)?;
    let mut bits = head.bits;
    bits.extend_from_slice(&tail);
    Ok(BitString::new(bits, Algorithm::Jkg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::CfrKind;

    fn cfr_from_mags(mags: &[f64]) -> Cfr {
        Cfr {
            gains: mags.iter().map(|&m| Complex64::new(m, 0.0)).collect(),
            kind: CfrKind::Observed,
        }
    }

    #[test]
    fn interleaver_is_deterministic_per_seed() {
        let a = make_interleaver(128, 99).unwrap();
        let b = make_interleaver(128, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn interleaver_is_a_bijection() {
        let ilv = make_interleaver(128, 5).unwrap();
        let mut sorted = ilv.permutation().to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..128).collect::<Vec<_>>());
    }

    #[test]
    fn distinct_seeds_rarely_collide() {
        // Birthday check over 10^3 seeds on N=128: collisions would need an
        // astronomically unlikely event (or a seeding bug).
        let mut seen = std::collections::HashSet::new();
        for seed in 0..1_000u64 {
            let ilv = make_interleaver(128, seed).unwrap();
            assert!(seen.insert(ilv.permutation().to_vec()), "collision at seed {seed}");
        }
    }

    #[test]
    fn interleaver_too_short() {
        assert!(make_interleaver(1, 0).is_err());
    }

    #[test]
    fn apply_identity_and_inverse() {
        let cfr = cfr_from_mags(&[1.0, 2.0, 3.0, 4.0]);
        let id = Interleaver::identity(4);
        assert_eq!(apply_interleaver(&cfr, &id).unwrap(), cfr.gains);

        let ilv = make_interleaver(4, 7).unwrap();
        let once = apply_interleaver(&cfr, &ilv).unwrap();
        let back = apply_interleaver(
            &Cfr {
                gains: once,
                kind: CfrKind::Observed,
            },
            &ilv.invert(),
        )
        .unwrap();
        assert_eq!(back, cfr.gains);
    }

    #[test]
    fn apply_swap_first_two() {
        let cfr = cfr_from_mags(&[1.0, 2.0, 3.0]);
        let ilv = Interleaver {
            perm: vec![1, 0, 2],
            seed: 0,
        };
        let out = apply_interleaver(&cfr, &ilv).unwrap();
        assert_eq!(
            out,
            vec![
                Complex64::new(2.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(3.0, 0.0)
            ]
        );
    }

    #[test]
    fn subblock_mean_examples() {
        let all_ones = cfr_from_mags(&[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(subblock_mean(&all_ones.gains), 1.0);

        let with_complex = vec![
            Complex64::new(3.0, 4.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        assert!((subblock_mean(&with_complex) - 1.25).abs() < 1e-15);

        let ramp = cfr_from_mags(&[2.0, 1.0, 1.0, 1.0]);
        assert!((subblock_mean(&ramp.gains) - 1.25).abs() < 1e-15);
    }

    #[test]
    fn above_mean_pattern_examples() {
        let p = above_mean_pattern(&cfr_from_mags(&[2.0, 1.0, 1.0, 1.0]).gains);
        assert_eq!((p.positions.as_slice(), p.count), ([0].as_slice(), 1));

        let p = above_mean_pattern(&cfr_from_mags(&[3.0, 3.0, 1.0, 1.0]).gains);
        assert_eq!((p.positions.as_slice(), p.count), ([0, 1].as_slice(), 2));

        let p = above_mean_pattern(&cfr_from_mags(&[1.0, 1.0, 1.0, 1.0]).gains);
        assert_eq!(p.count, 0);
        assert!(p.positions.is_empty());
    }

    #[test]
    fn full_count_is_impossible() {
        // Randomized: strict inequality can never put all n above the mean.
        let mut state = 0x12345u64;
        for _ in 0..10_000 {
            let mut mags = [0.0f64; 4];
            for m in &mut mags {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                *m = (state >> 11) as f64 / (1u64 << 53) as f64;
            }
            let p = pattern_of(&mags);
            assert!(p.count <= 3, "count n for {mags:?}");
        }
    }

    #[test]
    fn codebook_matches_published_rows() {
        // Row 1, row 5, row 12 spot checks.
        let c = encode_pattern_n4(&[0], 1).unwrap();
        assert_eq!((c.k1, c.k2), ([0, 0], [0, 1]));
        let c = encode_pattern_n4(&[0, 1], 2).unwrap();
        assert_eq!((c.k1, c.k2), ([0, 1], [0, 0]));
        let c = encode_pattern_n4(&[1, 2, 3], 3).unwrap();
        assert_eq!((c.k1, c.k2), ([1, 0], [1, 1]));
    }

    #[test]
    fn codebook_full_mapping() {
        let expected: [(&[usize], [u8; 4]); 14] = [
            (&[0], [0, 0, 0, 1]),
            (&[1], [0, 0, 1, 0]),
            (&[2], [0, 0, 1, 1]),
            (&[3], [1, 1, 0, 0]),
            (&[0, 1], [0, 1, 0, 0]),
            (&[0, 2], [0, 1, 0, 1]),
            (&[0, 3], [0, 1, 1, 0]),
            (&[1, 3], [0, 1, 1, 1]),
            (&[2, 3], [1, 1, 0, 1]),
            (&[1, 2], [1, 1, 1, 0]),
            (&[0, 1, 2], [1, 0, 0, 0]),
            (&[0, 2, 3], [1, 0, 0, 1]),
            (&[0, 1, 3], [1, 0, 1, 0]),
            (&[1, 2, 3], [1, 0, 1, 1]),
        ];
        let mut seen = std::collections::HashSet::new();
        for (positions, code) in expected {
            let c = encode_pattern_n4(positions, positions.len()).unwrap();
            assert_eq!(c.bits(), code, "pattern {positions:?}");
            assert_ne!(c.bits(), [0, 0, 0, 0]);
            assert_ne!(c.bits(), [1, 1, 1, 1]);
            assert!(seen.insert(code), "duplicate code for {positions:?}");
            // decode inverts
            assert_eq!(decode_pattern_n4(code).unwrap(), positions.to_vec());
        }
        assert_eq!(seen.len(), 14);
        assert!(decode_pattern_n4([0, 0, 0, 0]).is_none());
        assert!(decode_pattern_n4([1, 1, 1, 1]).is_none());
    }

    #[test]
    fn degenerate_patterns_are_rejected() {
        assert!(matches!(
            encode_pattern_n4(&[], 0),
            Err(Error::DegeneratePattern(0, 4))
        ));
        assert!(matches!(
            encode_pattern_n4(&[0, 1, 2, 3], 4),
            Err(Error::DegeneratePattern(4, 4))
        ));
    }

    #[test]
    fn nikg_lengths_follow_the_formula() {
        // N=128: n=4 → 128 bits, n=8 → 96 bits on a non-degenerate channel.
        let mags: Vec<f64> = (0..128).map(|k| 1.0 + (k % 7) as f64).collect();
        let cfr = cfr_from_mags(&mags);
        let ilv = Interleaver::identity(128);
        for (n, expect) in [(4usize, 128usize), (8, 96)] {
            let part = SubblockPartition::new(128, n).unwrap();
            let key = nikg(&cfr, &ilv, &part).unwrap();
            assert_eq!(key.len(), expect, "n={n}");
        }
    }

    #[test]
    fn nikg_on_flat_channel_is_empty() {
        let cfr = cfr_from_mags(&[1.0; 128]);
        let ilv = Interleaver::identity(128);
        let part = SubblockPartition::new(128, 4).unwrap();
        let key = nikg(&cfr, &ilv, &part).unwrap();
        assert!(key.is_empty());
    }

    #[test]
    fn amplitude_bits_examples() {
        let part = SubblockPartition::new(4, 4).unwrap();
        let b = amplitude_bits(&cfr_from_mags(&[2.0, 1.0, 1.0, 1.0]).gains, &part).unwrap();
        assert_eq!(b, vec![1, 0, 0, 0]);
        let b = amplitude_bits(&cfr_from_mags(&[1.0, 1.0, 1.0, 2.0]).gains, &part).unwrap();
        assert_eq!(b, vec![0, 0, 0, 1]);
        let b = amplitude_bits(&cfr_from_mags(&[1.0, 1.0, 1.0, 1.0]).gains, &part).unwrap();
        assert_eq!(b, vec![0, 0, 0, 0]);
    }

    #[test]
    fn niakg_lengths_follow_the_formula() {
        let mags: Vec<f64> = (0..128).map(|k| 1.0 + (k % 5) as f64 * 0.3).collect();
        let cfr = cfr_from_mags(&mags);
        let ilv = Interleaver::identity(128);
        for (n, expect) in [(4usize, 256usize), (16, 192), (32, 168)] {
            let part = SubblockPartition::new(128, n).unwrap();
            let key = niakg(&cfr, &ilv, &part).unwrap();
            assert_eq!(key.len(), expect, "n={n}");
        }
    }

    #[test]
    fn ckg_length_and_flat_channel() {
        let mags: Vec<f64> = (0..128).map(|k| 1.0 + k as f64).collect();
        let cfr = cfr_from_mags(&mags);
        let ilv = Interleaver::identity(128);
        let key = ckg(&cfr, &ilv).unwrap();
        assert_eq!(key.len(), 128);

        let flat = ckg(&cfr_from_mags(&[2.5; 128]), &ilv).unwrap();
        assert!(flat.bits().iter().all(|&b| b == 0));
    }

    #[test]
    fn ckg_matches_direct_threshold() {
        // Ramp magnitudes 1..=N: brute-force the threshold comparison.
        let n = 128usize;
        let mags: Vec<f64> = (1..=n).map(|k| k as f64).collect();
        let cfr = cfr_from_mags(&mags);
        let key = ckg(&cfr, &Interleaver::identity(n)).unwrap();
        let mean = mags.iter().sum::<f64>() / n as f64;
        let expected: Vec<u8> = mags.iter().map(|&m| u8::from(m > mean)).collect();
        assert_eq!(key.bits(), expected.as_slice());
        let ones = key.bits().iter().filter(|&&b| b == 1).count();
        assert_eq!(ones, n / 2); // ramp: exactly half above the mean
    }

    #[test]
    fn ikg_examples() {
        let part = SubblockPartition::new(4, 4).unwrap();
        let ilv = Interleaver::identity(4);
        let key = ikg(&cfr_from_mags(&[1.0, 4.0, 2.0, 3.0]), &ilv, &part).unwrap();
        assert_eq!(key.bits(), &[0, 1]); // argmax index 1

        // tie resolves to the first maximum
        let key = ikg(&cfr_from_mags(&[5.0, 5.0, 1.0, 1.0]), &ilv, &part).unwrap();
        assert_eq!(key.bits(), &[0, 0]);
    }

    #[test]
    fn ikg_jkg_lengths() {
        let mags: Vec<f64> = (0..128).map(|k| 1.0 + (k % 9) as f64 * 0.2).collect();
        let cfr = cfr_from_mags(&mags);
        let ilv = Interleaver::identity(128);
        let part = SubblockPartition::new(128, 4).unwrap();
        assert_eq!(ikg(&cfr, &ilv, &part).unwrap().len(), 64);
        assert_eq!(jkg(&cfr, &ilv, &part).unwrap().len(), 192);
    }

    #[test]
    fn extractors_are_deterministic_and_scale_invariant() {
        let mags: Vec<f64> = (0..128)
            .map(|k| 0.5 + ((k * 37 + 11) % 101) as f64 / 50.0)
            .collect();
        let cfr = cfr_from_mags(&mags);
        let scaled = cfr_from_mags(&mags.iter().map(|m| m * 3.7).collect::<Vec<_>>());
        let ilv = make_interleaver(128, 3).unwrap();
        let part = SubblockPartition::new(128, 4).unwrap();
        for alg in Algorithm::ALL {
            let a = alg.extract(&cfr, &ilv, &part).unwrap();
            let b = alg.extract(&cfr, &ilv, &part).unwrap();
            assert_eq!(a, b, "{alg} not deterministic");
            let c = alg.extract(&scaled, &ilv, &part).unwrap();
            assert_eq!(a.bits(), c.bits(), "{alg} not scale invariant");
        }
    }

    #[test]
    fn ascii_round_trip() {
        let key = BitString::new(vec![1, 0, 1, 1, 0], Algorithm::Ckg);
        let text = key.to_ascii();
        assert_eq!(text, "10110");
        let back = BitString::from_ascii(&text, Algorithm::Ckg).unwrap();
        assert_eq!(back, key);
        assert!(BitString::from_ascii("10x1", Algorithm::Ckg).is_err());
    }

    #[test]
    fn nominal_bit_counts_match_published_table() {
        for (n, nikg_bits, niakg_bits) in [(4, 128, 256), (8, 96, 224), (16, 64, 192), (32, 40, 168)]
        {
            let part = SubblockPartition::new(128, n).unwrap();
            assert_eq!(Algorithm::Nikg.nominal_bits(&part), nikg_bits);
            assert_eq!(Algorithm::Niakg.nominal_bits(&part), niakg_bits);
        }
    }
}
