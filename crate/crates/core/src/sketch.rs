//! Sketch embedding: coordinate `i` of a sequence is `(1/sqrt(t))` times the
//! sum of member `i`'s sign over the sequence's k-mers.
//!
//! Accumulation happens in one left-to-right pass over the k-mer stream; every
//! k-mer is pushed through all `t` members before the next one is read, so the
//! working set is the `t` accumulators and nothing sized by `|Σ|^k`.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hashfamily::{AlphaPowers, HashFamily, Modulus, SignHash};
use crate::kmer::{Alphabet, KmerCode, KmerEncoder};

/// Default embedding dimension.
pub const DEFAULT_T: usize = 1000;
/// Default k-mer length.
pub const DEFAULT_K: usize = 3;

/// One sequence's embedding: integer sign sums and their `1/sqrt(t)` scaling.
#[derive(Debug, Clone, PartialEq)]
pub struct SketchVector {
    accumulators: Vec<i64>,
    scaled: Vec<f64>,
    kmer_count: u64,
}

impl SketchVector {
    pub fn from_accumulators(accumulators: Vec<i64>, kmer_count: u64) -> Self {
        let root_t = libm::sqrt(accumulators.len() as f64);
        let scaled = accumulators.iter().map(|&a| a as f64 / root_t).collect();
        SketchVector {
            accumulators,
            scaled,
            kmer_count,
        }
    }

    /// Rebuilds a sketch from its scaled coordinates (e.g. read back from
    /// disk). Accumulators are recovered by rounding `scaled * sqrt(t)`; the
    /// k-mer count is not stored anywhere, so it is set to the largest
    /// `|accumulator|`, the tightest value consistent with the coordinate bound.
    pub fn from_scaled(scaled: Vec<f64>) -> Self {
        let root_t = libm::sqrt(scaled.len() as f64);
        let accumulators: Vec<i64> = scaled
            .iter()
            .map(|&s| libm::round(s * root_t) as i64)
            .collect();
        let kmer_count = accumulators
            .iter()
            .map(|a| a.unsigned_abs())
            .max()
            .unwrap_or(0);
        SketchVector {
            accumulators,
            scaled,
            kmer_count,
        }
    }

    pub fn t(&self) -> usize {
        self.accumulators.len()
    }

    pub fn accumulators(&self) -> &[i64] {
        &self.accumulators
    }

    pub fn scaled(&self) -> &[f64] {
        &self.scaled
    }

    pub fn kmer_count(&self) -> u64 {
        self.kmer_count
    }

    /// No valid k-mer contributed; all coordinates are zero.
    pub fn is_empty(&self) -> bool {
        self.kmer_count == 0
    }

    /// Unit-length copy of the scaled coordinates.
    pub fn normalize(&self) -> Result<Vec<f64>> {
        normalize(&self.scaled)
    }
}

/// `v / ||v||_2`.
pub fn normalize(v: &[f64]) -> Result<Vec<f64>> {
    let norm = l2_norm(v);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::Degenerate);
    }
    Ok(v.iter().map(|x| x / norm).collect())
}

pub(crate) fn l2_norm(v: &[f64]) -> f64 {
    // Scale by the largest magnitude so long sequences at large t never
    // overflow the sum of squares.
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 || !max.is_finite() {
        return max;
    }
    let ss: f64 = v.iter().map(|x| (x / max) * (x / max)).sum();
    max * libm::sqrt(ss)
}

/// Adds member signs for every code in `codes` into `acc`; returns the number
/// of codes consumed. Exactly `acc.len() * returned` calls to
/// [`SignHash::sign`] are made.
pub fn accumulate<H, I>(codes: I, members: &[H], modulus: Modulus, acc: &mut [i64]) -> u64
where
    H: SignHash,
    I: IntoIterator<Item = KmerCode>,
{
    assert_eq!(members.len(), acc.len(), "one accumulator per member");
    let mut count = 0;
    for code in codes {
        let pw = AlphaPowers::new(code.0, modulus);
        for (a, h) in acc.iter_mut().zip(members) {
            *a += h.sign(&pw) as i64;
        }
        count += 1;
    }
    count
}

/// A k-mer encoder bound to a hash family: the embedding function.
#[derive(Debug, Clone)]
pub struct Sketcher {
    encoder: KmerEncoder,
    family: HashFamily,
}

impl Sketcher {
    pub fn new(alphabet: Alphabet, k: usize, family: HashFamily) -> Result<Self> {
        let encoder = KmerEncoder::new(alphabet, k, family.modulus())?;
        Ok(Sketcher { encoder, family })
    }

    pub fn encoder(&self) -> &KmerEncoder {
        &self.encoder
    }

    pub fn family(&self) -> &HashFamily {
        &self.family
    }

    pub fn k(&self) -> usize {
        self.encoder.k()
    }

    pub fn t(&self) -> usize {
        self.family.t()
    }

    /// Embeds one sequence. Sequences with no valid window give the all-zero,
    /// [`SketchVector::is_empty`] sketch.
    pub fn embed(&self, seq: &[u8]) -> SketchVector {
        let mut acc = vec![0i64; self.family.t()];
        let n = accumulate(
            self.encoder.codes(seq),
            self.family.members(),
            self.family.modulus(),
            &mut acc,
        );
        SketchVector::from_accumulators(acc, n)
    }

    /// Embeds `(id, sequence)` pairs in order. With the `parallel` feature the
    /// rows are computed on the rayon pool; the result does not depend on it.
    pub fn embed_batch<S, B>(&self, seqs: &[(S, B)]) -> Result<EmbeddingMatrix>
    where
        S: AsRef<str> + Sync,
        B: AsRef<[u8]> + Sync,
    {
        check_unique(seqs.iter().map(|(id, _)| id.as_ref()))?;

        #[cfg(feature = "parallel")]
        let rows = {
            use rayon::prelude::*;
            seqs.par_iter()
                .map(|(_, s)| self.embed(s.as_ref()))
                .collect()
        };
        #[cfg(not(feature = "parallel"))]
        let rows = seqs.iter().map(|(_, s)| self.embed(s.as_ref())).collect();

        Ok(EmbeddingMatrix {
            ids: seqs
                .iter()
                .map(|(id, _)| String::from(id.as_ref()))
                .collect(),
            rows,
            params: self.params(),
        })
    }

    pub fn params(&self) -> EmbeddingParams {
        EmbeddingParams {
            t: self.family.t(),
            k: self.encoder.k(),
            seed: self.family.seed(),
            modulus: self.family.modulus().get(),
            alphabet: String::from(self.encoder.alphabet().name()),
        }
    }
}

/// Free-function form of [`Sketcher::embed`].
pub fn embed_sequence(
    seq: &[u8],
    k: usize,
    family: &HashFamily,
    alphabet: &Alphabet,
) -> Result<SketchVector> {
    let encoder = KmerEncoder::new(alphabet.clone(), k, family.modulus())?;
    let mut acc = vec![0i64; family.t()];
    let n = accumulate(
        encoder.codes(seq),
        family.members(),
        family.modulus(),
        &mut acc,
    );
    Ok(SketchVector::from_accumulators(acc, n))
}

fn check_unique<'a>(ids: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(Error::DuplicateId(String::from(id)));
        }
    }
    Ok(())
}

/// Parameters that, with the input sequences, regenerate an embedding exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingParams {
    pub t: usize,
    pub k: usize,
    pub seed: u64,
    pub modulus: u64,
    pub alphabet: String,
}

/// `n` sketches of common dimension with their sequence ids.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    ids: Vec<String>,
    rows: Vec<SketchVector>,
    params: EmbeddingParams,
}

impl EmbeddingMatrix {
    pub fn new(ids: Vec<String>, rows: Vec<SketchVector>, params: EmbeddingParams) -> Result<Self> {
        if ids.len() != rows.len() {
            return Err(Error::InvalidInput("one id per row required"));
        }
        if let Some(bad) = rows.iter().find(|r| r.t() != params.t) {
            return Err(Error::DimensionMismatch {
                left: params.t,
                right: bad.t(),
            });
        }
        check_unique(ids.iter().map(String::as_str))?;
        Ok(EmbeddingMatrix { ids, rows, params })
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn rows(&self) -> &[SketchVector] {
        &self.rows
    }

    pub fn params(&self) -> &EmbeddingParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn t(&self) -> usize {
        self.params.t
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &SketchVector)> {
        self.ids.iter().map(String::as_str).zip(&self.rows)
    }

    /// Rows at `indices`, in that order. Panics on an out-of-range index.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        EmbeddingMatrix::new(
            indices.iter().map(|&i| self.ids[i].clone()).collect(),
            indices.iter().map(|&i| self.rows[i].clone()).collect(),
            self.params.clone(),
        )
    }
}
