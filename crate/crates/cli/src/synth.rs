//! Seeded synthetic sequences for benchmarks, verification and tests.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use seqsketch::hashfamily::uniform_below;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn random_dna<R: RngCore>(rng: &mut R, len: usize) -> Vec<u8> {
    (0..len)
        .map(|_| b"ACGT"[uniform_below(rng, 4) as usize])
        .collect()
}

/// `count` uniform random DNA sequences with lengths in `min_len..=max_len`.
pub fn random_corpus(count: usize, min_len: usize, max_len: usize, seed: u64) -> Vec<Vec<u8>> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let len = min_len + uniform_below(&mut r, (max_len - min_len + 1) as u64) as usize;
            random_dna(&mut r, len)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct MotifSpec {
    pub classes: usize,
    pub per_class: usize,
    pub length: usize,
    pub motifs_per_class: usize,
    pub motif_len: usize,
    /// Copies of each motif written into every sequence.
    pub copies: usize,
}

impl Default for MotifSpec {
    fn default() -> Self {
        MotifSpec {
            classes: 4,
            per_class: 300,
            length: 300,
            motifs_per_class: 3,
            motif_len: 8,
            copies: 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LabeledSequence {
    pub id: String,
    pub label: String,
    pub sequence: Vec<u8>,
}

/// Random background with each class's motifs overwritten at random offsets.
/// Later insertions may overlap earlier ones.
pub fn motif_dataset(spec: &MotifSpec, seed: u64) -> Vec<LabeledSequence> {
    let mut r = rng(seed);
    let motifs: Vec<Vec<Vec<u8>>> = (0..spec.classes)
        .map(|_| {
            (0..spec.motifs_per_class)
                .map(|_| random_dna(&mut r, spec.motif_len))
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(spec.classes * spec.per_class);
    for (c, class_motifs) in motifs.iter().enumerate() {
        for i in 0..spec.per_class {
            let mut seq = random_dna(&mut r, spec.length);
            for m in class_motifs {
                for _ in 0..spec.copies {
                    let at =
                        uniform_below(&mut r, (spec.length - spec.motif_len + 1) as u64) as usize;
                    seq[at..at + spec.motif_len].copy_from_slice(m);
                }
            }
            out.push(LabeledSequence {
                id: format!("c{c}_{i}"),
                label: format!("class{c}"),
                sequence: seq,
            });
        }
    }
    out
}
