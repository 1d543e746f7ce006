//! File formats, FASTA ingestion and the `seqsketch` command line on top of
//! the [`seqsketch`] core.

pub mod alloc_track;
pub mod bench;
pub mod cli;
pub mod fasta;
pub mod formats;
pub mod synth;

pub use fasta::{parse_fasta, FastaError, FastaRecord};
pub use formats::{read_embeddings, write_embeddings, EmbeddingFormat, FormatError};
