//! Alphabets and the rolling k-mer encoder.
//!
//! A k-mer is read as a base-`|Σ|` integer, most significant symbol first.
//! Symbols outside the alphabet (ambiguity codes, alignment gaps) poison
//! every window that covers them; those windows are skipped.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hashfamily::Modulus;

const INVALID: u8 = u8::MAX;

/// The 20 standard amino acids in one-letter order.
pub const PROTEIN_SYMBOLS: &[u8; 20] = b"ACDEFGHIKLMNPQRSTVWY";
pub const DNA_SYMBOLS: &[u8; 4] = b"ACGT";

/// An ordered set of symbols, matched case-insensitively.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    name: String,
    symbols: Vec<u8>,
    lookup: [u8; 256],
}

impl core::fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Alphabet")
            .field("name", &self.name)
            .field(
                "symbols",
                &core::str::from_utf8(&self.symbols).unwrap_or("?"),
            )
            .finish()
    }
}

impl Alphabet {
    pub fn new(name: &str, symbols: &[u8]) -> Result<Self> {
        if symbols.len() < 2 {
            return Err(Error::InvalidParameter(
                "alphabet needs at least two symbols",
            ));
        }
        if symbols.len() >= INVALID as usize {
            return Err(Error::InvalidParameter("alphabet has too many symbols"));
        }
        let mut lookup = [INVALID; 256];
        for (digit, &s) in symbols.iter().enumerate() {
            for c in [s.to_ascii_uppercase(), s.to_ascii_lowercase()] {
                if lookup[c as usize] != INVALID {
                    return Err(Error::InvalidParameter("alphabet symbols must be unique"));
                }
                lookup[c as usize] = digit as u8;
                if !s.is_ascii_alphabetic() {
                    break;
                }
            }
        }
        Ok(Alphabet {
            name: String::from(name),
            symbols: symbols.iter().map(u8::to_ascii_uppercase).collect(),
            lookup,
        })
    }

    pub fn dna() -> Self {
        Self::new("dna", DNA_SYMBOLS).expect("built-in alphabet")
    }

    pub fn protein() -> Self {
        Self::new("protein", PROTEIN_SYMBOLS).expect("built-in alphabet")
    }

    /// `"dna"` or `"protein"`, case-insensitive.
    pub fn by_name(name: &str) -> Option<Self> {
        if name.eq_ignore_ascii_case("dna") {
            Some(Self::dna())
        } else if name.eq_ignore_ascii_case("protein") {
            Some(Self::protein())
        } else {
            None
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    /// Digit of `c`, or `None` when `c` is not in the alphabet.
    #[inline]
    pub fn encode_symbol(&self, c: u8) -> Option<u8> {
        match self.lookup[c as usize] {
            INVALID => None,
            d => Some(d),
        }
    }
}

/// Base-`|Σ|` integer reading of one k-mer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KmerCode(pub u64);

/// `|Σ|^k`, or `None` on u64 overflow.
pub fn kmer_space(alphabet_size: usize, k: usize) -> Option<u64> {
    (alphabet_size as u64).checked_pow(u32::try_from(k).ok()?)
}

/// Largest `k` with `|Σ|^k <= p`.
pub fn max_k(alphabet_size: usize, modulus: Modulus) -> usize {
    let mut k = 0;
    while kmer_space(alphabet_size, k + 1).is_some_and(|s| s <= modulus.get()) {
        k += 1;
    }
    k
}

/// Turns sequences into k-mer code streams for a fixed alphabet and `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmerEncoder {
    alphabet: Alphabet,
    k: usize,
    space: u64,
    top_weight: u64,
}

impl KmerEncoder {
    /// Fails unless `k >= 1` and `|Σ|^k <= p`, so distinct k-mers stay
    /// distinct after reduction mod `p`.
    pub fn new(alphabet: Alphabet, k: usize, modulus: Modulus) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1"));
        }
        let too_large = Error::KmerSpaceTooLarge {
            alphabet_size: alphabet.size(),
            k,
        };
        let space = kmer_space(alphabet.size(), k).ok_or(too_large.clone())?;
        if space > modulus.get() {
            return Err(too_large);
        }
        let top_weight = space / alphabet.size() as u64;
        Ok(KmerEncoder {
            alphabet,
            k,
            space,
            top_weight,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `|Σ|^k`.
    pub fn space(&self) -> u64 {
        self.space
    }

    /// Direct (non-rolling) code of a window; `None` if the window has the
    /// wrong length or contains an out-of-alphabet symbol.
    pub fn encode_window(&self, window: &[u8]) -> Option<KmerCode> {
        if window.len() != self.k {
            return None;
        }
        let base = self.alphabet.size() as u64;
        window
            .iter()
            .try_fold(0u64, |code, &c| {
                Some(code * base + self.alphabet.encode_symbol(c)? as u64)
            })
            .map(KmerCode)
    }

    /// Codes of every fully valid window, left to right.
    pub fn codes<'a>(&'a self, seq: &'a [u8]) -> KmerCodes<'a> {
        KmerCodes {
            encoder: self,
            seq,
            pos: 0,
            run: 0,
            code: 0,
        }
    }
}

/// Rolling iterator returned by [`KmerEncoder::codes`].
#[derive(Debug, Clone)]
pub struct KmerCodes<'a> {
    encoder: &'a KmerEncoder,
    seq: &'a [u8],
    pos: usize,
    /// Valid symbols ending just before `pos`.
    run: usize,
    code: u64,
}

impl Iterator for KmerCodes<'_> {
    type Item = KmerCode;

    #[inline]
    fn next(&mut self) -> Option<KmerCode> {
        let enc = self.encoder;
        let base = enc.alphabet.size() as u64;
        while self.pos < self.seq.len() {
            let c = self.seq[self.pos];
            self.pos += 1;
            let Some(d) = enc.alphabet.encode_symbol(c) else {
                self.run = 0;
                self.code = 0;
                continue;
            };
            if self.run >= enc.k {
                // Drop the outgoing leading symbol, shift, append.
                let out = enc.alphabet.lookup[self.seq[self.pos - 1 - enc.k] as usize] as u64;
                self.code = (self.code - out * enc.top_weight) * base + d as u64;
            } else {
                self.code = self.code * base + d as u64;
                self.run += 1;
            }
            if self.run >= enc.k {
                return Some(KmerCode(self.code));
            }
        }
        None
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let remaining = self.seq.len() - self.pos;
        (
            0,
            Some((remaining + self.run + 1).saturating_sub(self.encoder.k)),
        )
    }
}
