//! Exact reference computations: the k-mer spectrum, the spectrum kernel, and
//! a sketch assembled from the explicit spectrum. These are brute force and
//! exist to check the streaming path, so they take deliberately different
//! routes: windows are decoded one by one, and hash polynomials are evaluated
//! by Horner's rule with plain `%` reduction.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hashfamily::{HashFamily, HashParams};
use crate::kmer::{kmer_space, Alphabet, KmerCode};
use crate::sketch::SketchVector;

/// Largest `|Σ|^k` the sparse oracle accepts (`4^12`).
pub const ORACLE_MAX_SPACE: u64 = 1 << 24;
/// Largest `|Σ|^k` the dense oracle accepts (`4^8`).
pub const DENSE_MAX_SPACE: u64 = 1 << 16;

fn guard(alphabet: &Alphabet, k: usize, limit: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1"));
    }
    let err = Error::OracleScale {
        alphabet_size: alphabet.size(),
        k,
        limit,
    };
    match kmer_space(alphabet.size(), k) {
        Some(s) if s <= limit => Ok(s),
        _ => Err(err),
    }
}

fn window_code(window: &[u8], alphabet: &Alphabet) -> Option<u64> {
    let base = alphabet.size() as u64;
    let mut code = 0;
    for &c in window {
        code = code * base + alphabet.encode_symbol(c)? as u64;
    }
    Some(code)
}

/// Sparse k-mer count vector of one sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumVector {
    counts: BTreeMap<KmerCode, u64>,
    k: usize,
    total: u64,
}

impl SpectrumVector {
    pub fn counts(&self) -> &BTreeMap<KmerCode, u64> {
        &self.counts
    }

    pub fn get(&self, code: KmerCode) -> u64 {
        self.counts.get(&code).copied().unwrap_or(0)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of k-mers, which is also the l1 norm.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn l1_norm(&self) -> f64 {
        self.total as f64
    }

    /// Inner product, iterating the smaller of the two maps.
    pub fn dot(&self, other: &SpectrumVector) -> u64 {
        let (small, large) = if self.counts.len() <= other.counts.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .counts
            .iter()
            .map(|(code, &c)| c * large.get(*code))
            .sum()
    }
}

/// Exact spectrum; windows with an out-of-alphabet symbol are left out.
pub fn spectrum(seq: &[u8], k: usize, alphabet: &Alphabet) -> Result<SpectrumVector> {
    guard(alphabet, k, ORACLE_MAX_SPACE)?;
    let mut counts = BTreeMap::new();
    let mut total = 0;
    if seq.len() >= k {
        for w in seq.windows(k) {
            if let Some(code) = window_code(w, alphabet) {
                *counts.entry(KmerCode(code)).or_insert(0) += 1;
                total += 1;
            }
        }
    }
    Ok(SpectrumVector { counts, k, total })
}

/// Dense `|Σ|^k` count array; only for `|Σ|^k <=` [`DENSE_MAX_SPACE`].
pub fn dense_spectrum(seq: &[u8], k: usize, alphabet: &Alphabet) -> Result<Vec<u64>> {
    let space = guard(alphabet, k, DENSE_MAX_SPACE)?;
    let mut counts = vec![0u64; space as usize];
    if seq.len() >= k {
        for w in seq.windows(k) {
            if let Some(code) = window_code(w, alphabet) {
                counts[code as usize] += 1;
            }
        }
    }
    Ok(counts)
}

/// Spectrum kernel `K(X, Y) = <Φ_k(X), Φ_k(Y)>`.
pub fn exact_kernel(x: &[u8], y: &[u8], k: usize, alphabet: &Alphabet) -> Result<u64> {
    Ok(spectrum(x, k, alphabet)?.dot(&spectrum(y, k, alphabet)?))
}

/// `sqrt(sum counts^2)`.
pub fn exact_l2_norm(s: &SpectrumVector) -> f64 {
    let sq: u64 = s.counts.values().map(|c| c * c).sum();
    libm::sqrt(sq as f64)
}

/// Horner evaluation with `%` reduction, independent of the fast path.
pub fn reference_sign(h: &HashParams, alpha: u64) -> i8 {
    let p = h.modulus().get() as u128;
    let x = alpha as u128 % p;
    let [a0, a1, a2, a3] = h.coeffs().map(|a| a as u128);
    let v = (((a3 * x % p + a2) % p * x % p + a1) % p * x % p + a0) % p;
    if v.is_multiple_of(2) {
        -1
    } else {
        1
    }
}

/// Sketch computed as `Σ_γ count(γ) · h_i(γ)` over the explicit spectrum.
pub fn sketch_from_spectrum(s: &SpectrumVector, family: &HashFamily) -> SketchVector {
    let acc = family
        .iter()
        .map(|h| {
            s.counts
                .iter()
                .map(|(code, &c)| c as i64 * reference_sign(h, code.0) as i64)
                .sum()
        })
        .collect();
    SketchVector::from_accumulators(acc, s.total)
}

pub fn sketch_via_spectrum(
    seq: &[u8],
    k: usize,
    family: &HashFamily,
    alphabet: &Alphabet,
) -> Result<SketchVector> {
    Ok(sketch_from_spectrum(&spectrum(seq, k, alphabet)?, family))
}
