//! Degree-3 Carter–Wegman polynomials over a prime field, reduced to a
//! `{-1, +1}` sign. A family of `t` independently drawn polynomials is the
//! random projection behind every sketch coordinate.
//!
//! Coefficients are drawn from ChaCha20 (`rand_chacha`) seeded through
//! `SeedableRng::seed_from_u64`, with plain rejection sampling against the
//! smallest power-of-two mask covering `p`. Both steps are fixed algorithms,
//! so a `(t, seed, p)` triple names the same family on every platform.

use alloc::vec::Vec;
use core::ops::Deref;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};

/// The Mersenne prime 2^61 - 1, the default modulus.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

/// Largest admissible modulus (exclusive). Keeps `a0 + a1 x + a2 x^2 + a3 x^3`
/// below 2^128 before the single final reduction.
pub const MODULUS_LIMIT: u64 = 1 << 62;

/// A prime modulus with a fast path for 2^61 - 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MODULUS_LIMIT {
            return Err(Error::InvalidParameter("modulus must be below 2^62"));
        }
        if !is_prime(p) {
            return Err(Error::InvalidParameter("modulus must be prime"));
        }
        Ok(Modulus(p))
    }

    pub const fn mersenne61() -> Self {
        Modulus(MERSENNE_61)
    }

    #[inline]
    pub const fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: u128) -> u64 {
        if self.0 == MERSENNE_61 {
            // x < 2^126 here, so one fold leaves < 2^65 and a second < 2^61 + 16.
            let m = MERSENNE_61 as u128;
            let folded = (x & m) + (x >> 61);
            let mut r = ((folded & m) + (folded >> 61)) as u64;
            if r >= MERSENNE_61 {
                r -= MERSENNE_61;
            }
            r
        } else {
            (x % self.0 as u128) as u64
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }
}

impl Default for Modulus {
    fn default() -> Self {
        Modulus::mersenne61()
    }
}

/// `alpha mod p` and its square and cube, shared by every member of a family
/// evaluated at the same k-mer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphaPowers {
    pub x: u64,
    pub x2: u64,
    pub x3: u64,
}

impl AlphaPowers {
    #[inline]
    pub fn new(alpha: u64, modulus: Modulus) -> Self {
        let x = modulus.reduce(alpha as u128);
        let x2 = modulus.mul(x, x);
        let x3 = modulus.mul(x2, x);
        AlphaPowers { x, x2, x3 }
    }
}

/// Coefficients `a0..a3` of one hash polynomial, with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HashParams {
    coeffs: [u64; 4],
    modulus: Modulus,
}

impl HashParams {
    /// Builds a member from explicit coefficients; each must be `< p`.
    pub fn new(coeffs: [u64; 4], modulus: Modulus) -> Result<Self> {
        if coeffs.iter().any(|&a| a >= modulus.get()) {
            return Err(Error::InvalidParameter("hash coefficient must be below p"));
        }
        Ok(HashParams { coeffs, modulus })
    }

    pub fn coeffs(&self) -> [u64; 4] {
        self.coeffs
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// `((a0 + a1 x + a2 x^2 + a3 x^3) mod p) mod 2`.
    #[inline]
    pub fn evaluate_g(&self, alpha: u64) -> u8 {
        self.g_from_powers(&AlphaPowers::new(alpha, self.modulus))
    }

    /// `-1` when `g = 0`, `+1` when `g = 1`.
    #[inline]
    pub fn evaluate_sign(&self, alpha: u64) -> i8 {
        g_to_sign(self.evaluate_g(alpha))
    }

    #[inline]
    pub fn g_from_powers(&self, pw: &AlphaPowers) -> u8 {
        let [a0, a1, a2, a3] = self.coeffs;
        let sum = a0 as u128
            + a1 as u128 * pw.x as u128
            + a2 as u128 * pw.x2 as u128
            + a3 as u128 * pw.x3 as u128;
        (self.modulus.reduce(sum) & 1) as u8
    }
}

#[inline]
fn g_to_sign(g: u8) -> i8 {
    ((g as i8) << 1) - 1
}

/// Anything that can map a k-mer (given as precomputed powers) to a sign.
///
/// The sketcher is generic over this so the number of hash evaluations can be
/// observed from tests.
pub trait SignHash {
    fn sign(&self, powers: &AlphaPowers) -> i8;
}

impl SignHash for HashParams {
    #[inline]
    fn sign(&self, powers: &AlphaPowers) -> i8 {
        g_to_sign(self.g_from_powers(powers))
    }
}

/// `t` hash polynomials sharing one modulus, reproducible from `seed`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashFamily {
    members: Vec<HashParams>,
    seed: u64,
    modulus: Modulus,
}

impl HashFamily {
    /// Draws `t` members with coefficients uniform on `[0, p - 1]`.
    pub fn sample(t: usize, seed: u64, modulus: Modulus) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidParameter("t must be at least 1"));
        }
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let p = modulus.get();
        let members = (0..t)
            .map(|_| HashParams {
                coeffs: core::array::from_fn(|_| uniform_below(&mut rng, p)),
                modulus,
            })
            .collect();
        Ok(HashFamily {
            members,
            seed,
            modulus,
        })
    }

    /// Wraps explicit members. The seed is recorded but does not regenerate them.
    pub fn from_members(members: Vec<HashParams>, seed: u64) -> Result<Self> {
        let first = members
            .first()
            .ok_or(Error::InvalidParameter("t must be at least 1"))?;
        let modulus = first.modulus;
        if members.iter().any(|m| m.modulus != modulus) {
            return Err(Error::InvalidParameter(
                "all family members must share one modulus",
            ));
        }
        Ok(HashFamily {
            members,
            seed,
            modulus,
        })
    }

    pub fn t(&self) -> usize {
        self.members.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn members(&self) -> &[HashParams] {
        &self.members
    }
}

impl Deref for HashFamily {
    type Target = [HashParams];

    fn deref(&self) -> &[HashParams] {
        &self.members
    }
}

/// Uniform integer in `[0, bound)` by masked rejection.
pub fn uniform_below<R: RngCore>(rng: &mut R, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let mask = u64::MAX >> (bound - 1).leading_zeros().min(63);
    loop {
        let v = rng.next_u64() & mask;
        if v < bound {
            return v;
        }
    }
}

/// SplitMix64 finaliser over `base + index`; used to give trial `i` of a
/// repeated experiment its own family seed.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; these twelve bases are exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn big_g(coeffs: [u64; 4], p: u64, alpha: u64) -> u8 {
        let p = BigUint::from(p);
        let a = BigUint::from(alpha);
        let mut acc = BigUint::from(0u32);
        for (i, c) in coeffs.iter().enumerate() {
            acc += BigUint::from(*c) * a.pow(i as u32);
        }
        let r = acc % &p;
        (r % BigUint::from(2u32)).try_into().unwrap()
    }

    fn params(coeffs: [u64; 4]) -> HashParams {
        HashParams::new(coeffs, Modulus::mersenne61()).unwrap()
    }

    #[test]
    fn zero_and_constant_polynomials() {
        let zero = params([0; 4]);
        let one = params([1, 0, 0, 0]);
        for alpha in [0, 1, 7, 63, MERSENNE_61 - 1, u64::MAX] {
            assert_eq!(zero.evaluate_g(alpha), 0);
            assert_eq!(zero.evaluate_sign(alpha), -1);
            assert_eq!(one.evaluate_g(alpha), 1);
            assert_eq!(one.evaluate_sign(alpha), 1);
        }
    }

    #[test]
    fn matches_bigint_reference() {
        let mut rng = ChaCha20Rng::seed_from_u64(99);
        for p in [
            MERSENNE_61,
            1_000_000_007,
            65_537,
            2_305_843_009_213_693_921,
            (1 << 62) - 57,
        ] {
            let modulus = Modulus::new(p).unwrap();
            for _ in 0..2_500 {
                let coeffs = core::array::from_fn(|_| uniform_below(&mut rng, p));
                let alpha = rng.next_u64() >> (rng.next_u64() % 64);
                let h = HashParams::new(coeffs, modulus).unwrap();
                let g = h.evaluate_g(alpha);
                assert_eq!(g, big_g(coeffs, p, alpha), "p={p} {coeffs:?} alpha={alpha}");
                assert_eq!(h.evaluate_sign(alpha) as i32, 1 - 2 * (1 - g as i32));
            }
        }
    }

    #[test]
    fn overflow_corner() {
        let p = MERSENNE_61;
        let h = params([p - 1; 4]);
        assert_eq!(h.evaluate_g(p - 1), big_g([p - 1; 4], p, p - 1));
        assert_eq!(h.evaluate_g(u64::MAX), big_g([p - 1; 4], p, u64::MAX));
    }

    #[test]
    fn mersenne_reduction_agrees_with_division() {
        let m = Modulus::mersenne61();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let x = ((rng.next_u64() as u128) << 62 | rng.next_u64() as u128) >> 2;
            assert_eq!(m.reduce(x) as u128, x % MERSENNE_61 as u128);
        }
        let top = (1u128 << 126) - 1;
        assert_eq!(m.reduce(top) as u128, top % MERSENNE_61 as u128);
    }

    #[test]
    fn sample_is_deterministic_and_in_range() {
        let a = HashFamily::sample(1000, 42, Modulus::mersenne61()).unwrap();
        let b = HashFamily::sample(1000, 42, Modulus::mersenne61()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.t(), 1000);
        assert!(a
            .iter()
            .all(|m| m.coeffs().iter().all(|&c| c < MERSENNE_61)));
        let c = HashFamily::sample(1000, 43, Modulus::mersenne61()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_t_rejected() {
        assert_eq!(
            HashFamily::sample(0, 1, Modulus::mersenne61()),
            Err(Error::InvalidParameter("t must be at least 1"))
        );
    }

    #[test]
    fn coefficient_range_enforced() {
        assert!(HashParams::new([MERSENNE_61, 0, 0, 0], Modulus::mersenne61()).is_err());
    }

    #[test]
    fn modulus_validation() {
        assert!(Modulus::new(4).is_err());
        assert!(Modulus::new(1).is_err());
        assert!(Modulus::new(MODULUS_LIMIT + 1).is_err());
        assert!(Modulus::new(MERSENNE_61).is_ok());
        assert!(Modulus::new(3).is_ok());
    }

    #[test]
    fn primality_small_and_known() {
        let brute = |n: u64| {
            n >= 2
                && (2..n)
                    .take_while(|d| d * d <= n)
                    .all(|d| !n.is_multiple_of(d))
        };
        for n in 0..5_000 {
            assert_eq!(is_prime(n), brute(n), "{n}");
        }
        assert!(is_prime(MERSENNE_61));
        assert!(!is_prime((1 << 59) - 1));
        // Strong pseudoprime to bases 2..=11.
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn near_balance_of_one_member() {
        let fam = HashFamily::sample(1, 2024, Modulus::mersenne61()).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        let n = 100_000;
        let plus = (0..n)
            .filter(|_| fam[0].evaluate_sign(uniform_below(&mut rng, MERSENNE_61)) == 1)
            .count();
        let frac = plus as f64 / n as f64;
        assert!((0.47..=0.53).contains(&frac), "{frac}");
    }

    #[test]
    fn pairwise_decorrelation() {
        // 10^3 random distinct pairs, 10^3 members.
        let fam = HashFamily::sample(1000, 7, Modulus::mersenne61()).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        for _ in 0..1000 {
            let a1 = uniform_below(&mut rng, 1 << 20);
            let mut a2 = uniform_below(&mut rng, 1 << 20);
            while a2 == a1 {
                a2 = uniform_below(&mut rng, 1 << 20);
            }
            let mean = fam
                .iter()
                .map(|h| (h.evaluate_sign(a1) * h.evaluate_sign(a2)) as f64)
                .sum::<f64>()
                / fam.t() as f64;
            assert!(mean.abs() < 0.15, "pair ({a1},{a2}) mean {mean}");
        }
    }

    #[test]
    fn decorrelation_on_dna_trimers_with_t74() {
        let fam = HashFamily::sample(74, 7, Modulus::mersenne61()).unwrap();
        let mut total = 0.0;
        let mut pairs = 0;
        for a1 in 0..64u64 {
            for a2 in (a1 + 1)..64 {
                total += fam
                    .iter()
                    .map(|h| (h.evaluate_sign(a1) * h.evaluate_sign(a2)) as f64)
                    .sum::<f64>()
                    / 74.0;
                pairs += 1;
            }
        }
        let mean = total / pairs as f64;
        assert!(mean.abs() < 0.15, "{mean}");
    }

    #[test]
    fn derived_seeds_differ() {
        let s: Vec<u64> = (0..100).map(|i| derive_seed(42, i)).collect();
        for i in 0..s.len() {
            for j in (i + 1)..s.len() {
                assert_ne!(s[i], s[j]);
            }
        }
    }
}
