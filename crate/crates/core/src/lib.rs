//! Fixed-length embeddings of biological sequences whose inner products
//! estimate the k-mer spectrum kernel.
//!
//! Each of `t` coordinates projects the sequence's k-mer count vector onto a
//! random `±1` vector drawn from a 4-universal polynomial hash family. The
//! embedding is computed in one streaming pass, needs `O(t)` memory, and
//! `<x̂, ŷ>` is an unbiased estimate of `<Φ_k(X), Φ_k(Y)>`.
//!
//! ```
//! use seqsketch::{Alphabet, HashFamily, Modulus, Sketcher, approx_kernel};
//!
//! let family = HashFamily::sample(1000, 42, Modulus::mersenne61()).unwrap();
//! let sketcher = Sketcher::new(Alphabet::dna(), 3, family).unwrap();
//! let x = sketcher.embed(b"ACGTACGGTTAC");
//! let y = sketcher.embed(b"ACGTTCGGTTAA");
//! let estimate = approx_kernel(&x, &y).unwrap();
//! # let _ = estimate;
//! ```
//!
//! The crate is `no_std` (with `alloc`) when built without default features.
//! The `parallel` feature spreads batch embedding, Gram assembly,
//! verification trials and kNN queries across a rayon pool; results are
//! identical either way.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod classifier;
pub mod error;
pub mod hashfamily;
pub mod kmer;
pub mod oracle;
pub mod similarity;
pub mod sketch;

pub use classifier::{evaluate, knn_predict, ClassificationMetrics, LabeledEmbeddings, Metric};
pub use error::{Error, Result};
pub use hashfamily::{HashFamily, HashParams, Modulus, MERSENNE_61};
pub use kmer::{Alphabet, KmerCode, KmerEncoder};
pub use oracle::{exact_kernel, spectrum, SpectrumVector};
pub use similarity::{
    approx_kernel, cosine_and_l2, gram_matrix, required_t, verify_guarantee, GuaranteeParams,
    KernelMatrix, VerificationReport, VerifyConfig,
};
pub use sketch::{
    embed_sequence, normalize, EmbeddingMatrix, EmbeddingParams, SketchVector, Sketcher,
};
