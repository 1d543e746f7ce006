//! Inner products, cosine and l2 distances between sketches, Gram matrices,
//! and the sample-size arithmetic and Monte Carlo check for how closely sketch
//! inner products track the exact spectrum kernel.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::hashfamily::{derive_seed, uniform_below, HashFamily, Modulus};
use crate::kmer::Alphabet;
use crate::oracle::{self, SpectrumVector};
use crate::sketch::{l2_norm, EmbeddingMatrix, SketchVector, Sketcher};

/// Accepted deviation of an input's norm from 1 in [`cosine_and_l2`].
pub const UNIT_TOLERANCE: f64 = 1e-6;

/// Dot product, summed in ascending index order.
pub fn dot(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let mut s = 0.0;
    for (a, b) in x.iter().zip(y) {
        s += a * b;
    }
    Ok(s)
}

/// Sketch estimate of the spectrum kernel: `<x̂, ŷ>`.
pub fn approx_kernel(x: &SketchVector, y: &SketchVector) -> Result<f64> {
    dot(x.scaled(), y.scaled())
}

/// `(cos θ, d)` for unit vectors, where `d^2 = 2 - 2 cos θ`.
pub fn cosine_and_l2(x_unit: &[f64], y_unit: &[f64]) -> Result<(f64, f64)> {
    for v in [x_unit, y_unit] {
        if (l2_norm(v) - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::InvalidInput("cosine_and_l2 expects unit vectors"));
        }
    }
    let cos = dot(x_unit, y_unit)?;
    let d = libm::sqrt((2.0 - 2.0 * cos).max(0.0));
    debug_assert!((d * d + 2.0 * cos - 2.0).abs() <= 1e-9);
    Ok((cos, d))
}

/// Cosine of the angle between two vectors; 0 when either is all-zero.
pub fn cosine(x: &[f64], y: &[f64]) -> Result<f64> {
    let d = dot(x, y)?;
    let n = l2_norm(x) * l2_norm(y);
    Ok(if n == 0.0 { 0.0 } else { d / n })
}

pub fn euclidean(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let mut s = 0.0;
    for (a, b) in x.iter().zip(y) {
        s += (a - b) * (a - b);
    }
    Ok(libm::sqrt(s))
}

/// Accuracy `epsilon`, failure probability `delta`, and the sketch dimension
/// that achieves them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuaranteeParams {
    pub epsilon: f64,
    pub delta: f64,
    pub t_required: usize,
}

/// `t = ceil((2 / ε²) · ln(1 / δ))`, at least 1.
pub fn required_t(epsilon: f64, delta: f64) -> Result<GuaranteeParams> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter("epsilon must lie in (0, 1)"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter("delta must lie in (0, 1)"));
    }
    let t = libm::ceil(2.0 / (epsilon * epsilon) * libm::log(1.0 / delta));
    Ok(GuaranteeParams {
        epsilon,
        delta,
        t_required: (t as usize).max(1),
    })
}

/// Smallest `ε` that `t` dimensions guarantee at failure probability `delta`.
pub fn epsilon_for(t: usize, delta: f64) -> Result<f64> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter("delta must lie in (0, 1)"));
    }
    Ok(libm::sqrt(2.0 * libm::log(1.0 / delta) / t as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMode {
    Approximate,
    Exact,
}

/// Symmetric `n × n` kernel values, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    ids: Vec<String>,
    values: Vec<f64>,
    mode: KernelMode,
}

impl KernelMatrix {
    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn mode(&self) -> KernelMode {
        self.mode
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.n();
        (0..n).all(|i| (i + 1..n).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    /// Fills the upper triangle with `f(i, j)` and mirrors it.
    fn from_upper<F>(ids: Vec<String>, mode: KernelMode, f: F) -> Self
    where
        F: Fn(usize, usize) -> f64 + Sync,
    {
        let n = ids.len();
        let upper_row = |i: usize| (i..n).map(|j| f(i, j)).collect::<Vec<f64>>();

        #[cfg(feature = "parallel")]
        let upper: Vec<Vec<f64>> = {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(upper_row).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let upper: Vec<Vec<f64>> = (0..n).map(upper_row).collect();

        let mut values = vec![0.0; n * n];
        for (i, row) in upper.iter().enumerate() {
            for (off, &v) in row.iter().enumerate() {
                let j = i + off;
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        KernelMatrix { ids, values, mode }
    }
}

/// Pairwise sketch inner products of every row.
pub fn gram_matrix(m: &EmbeddingMatrix) -> KernelMatrix {
    let rows = m.rows();
    KernelMatrix::from_upper(m.ids().to_vec(), KernelMode::Approximate, |i, j| {
        dot(rows[i].scaled(), rows[j].scaled()).expect("rows share t")
    })
}

/// Pairwise exact spectrum kernels.
pub fn exact_gram<S, B>(seqs: &[(S, B)], k: usize, alphabet: &Alphabet) -> Result<KernelMatrix>
where
    S: AsRef<str>,
    B: AsRef<[u8]>,
{
    let spectra = seqs
        .iter()
        .map(|(_, s)| oracle::spectrum(s.as_ref(), k, alphabet))
        .collect::<Result<Vec<_>>>()?;
    let ids = seqs
        .iter()
        .map(|(id, _)| String::from(id.as_ref()))
        .collect();
    Ok(KernelMatrix::from_upper(ids, KernelMode::Exact, |i, j| {
        spectra[i].dot(&spectra[j]) as f64
    }))
}

/// How each trial picks the sequence pair it measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairMode {
    /// A fresh random pair of distinct corpus entries per trial.
    Fresh,
    /// The same two corpus entries in every trial.
    Fixed(usize, usize),
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub k: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub trials: usize,
    pub seed: u64,
    pub modulus: Modulus,
    pub alphabet: Alphabet,
    pub pair_mode: PairMode,
}

impl VerifyConfig {
    pub fn new(k: usize, epsilon: f64, delta: f64, trials: usize, seed: u64) -> Self {
        VerifyConfig {
            k,
            epsilon,
            delta,
            trials,
            seed,
            modulus: Modulus::mersenne61(),
            alphabet: Alphabet::dna(),
            pair_mode: PairMode::Fresh,
        }
    }
}

pub const MIN_TRIALS: usize = 100;

/// One trial: a fresh hash family of `t_required` members applied to a pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub left: usize,
    pub right: usize,
    pub estimate: f64,
    pub exact: f64,
    /// `estimate - exact`.
    pub error: f64,
    /// `ε · |x|_1 · |y|_1`, norms read as k-mer counts.
    pub bound_l1: f64,
    /// `ε · |x|_2 · |y|_2`.
    pub bound_l2: f64,
}

impl TrialRecord {
    pub fn exceeded_l1(&self) -> bool {
        self.error.abs() > self.bound_l1
    }

    pub fn exceeded_l2(&self) -> bool {
        self.error.abs() > self.bound_l2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub params: GuaranteeParams,
    pub records: Vec<TrialRecord>,
    pub failure_fraction_l1: f64,
    pub failure_fraction_l2: f64,
    /// `δ + 3 sqrt(δ(1 - δ) / trials)`.
    pub allowed_failure: f64,
    pub mean_error: f64,
    pub error_std: f64,
    /// `mean_error / (error_std / sqrt(trials))`; 0 when the spread is 0.
    pub mean_z: f64,
    /// False when every trial compares a sequence with itself, where the
    /// mean-error test is reported but not enforced.
    pub mean_checked: bool,
    pub passed: bool,
}

impl VerificationReport {
    pub fn trials(&self) -> usize {
        self.records.len()
    }
}

/// Runs `cfg.trials` independent trials and checks the failure rate against
/// `δ` (with three-sigma binomial slack) and the mean signed error against
/// three standard errors.
pub fn verify_guarantee<B: AsRef<[u8]> + Sync>(
    corpus: &[B],
    cfg: &VerifyConfig,
) -> Result<VerificationReport> {
    let params = required_t(cfg.epsilon, cfg.delta)?;
    if cfg.trials < MIN_TRIALS {
        return Err(Error::InvalidParameter(
            "verification needs at least 100 trials",
        ));
    }
    let spectra: Vec<SpectrumVector> = corpus
        .iter()
        .map(|s| oracle::spectrum(s.as_ref(), cfg.k, &cfg.alphabet))
        .collect::<Result<_>>()?;

    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let pairs: Vec<(usize, usize)> = match cfg.pair_mode {
        PairMode::Fixed(a, b) => {
            if a >= corpus.len() || b >= corpus.len() {
                return Err(Error::InvalidInput("fixed pair index outside corpus"));
            }
            vec![(a, b); cfg.trials]
        }
        PairMode::Fresh => {
            let n = corpus.len() as u64;
            if n < 2 {
                return Err(Error::InvalidInput(
                    "fresh pairs need at least two sequences",
                ));
            }
            (0..cfg.trials)
                .map(|_| {
                    let a = uniform_below(&mut rng, n);
                    let b = (a + 1 + uniform_below(&mut rng, n - 1)) % n;
                    (a as usize, b as usize)
                })
                .collect()
        }
    };

    let run_trial = |trial: usize| -> Result<TrialRecord> {
        let (a, b) = pairs[trial];
        let family = HashFamily::sample(
            params.t_required,
            derive_seed(cfg.seed, trial as u64),
            cfg.modulus,
        )?;
        let sketcher = Sketcher::new(cfg.alphabet.clone(), cfg.k, family)?;
        let x = sketcher.embed(corpus[a].as_ref());
        let y = sketcher.embed(corpus[b].as_ref());
        let estimate = approx_kernel(&x, &y)?;
        let exact = spectra[a].dot(&spectra[b]) as f64;
        Ok(TrialRecord {
            trial,
            left: a,
            right: b,
            estimate,
            exact,
            error: estimate - exact,
            bound_l1: cfg.epsilon * spectra[a].l1_norm() * spectra[b].l1_norm(),
            bound_l2: cfg.epsilon
                * oracle::exact_l2_norm(&spectra[a])
                * oracle::exact_l2_norm(&spectra[b]),
        })
    };

    #[cfg(feature = "parallel")]
    let records: Vec<TrialRecord> = {
        use rayon::prelude::*;
        (0..cfg.trials)
            .into_par_iter()
            .map(run_trial)
            .collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let records: Vec<TrialRecord> = (0..cfg.trials).map(run_trial).collect::<Result<_>>()?;

    let n = records.len() as f64;
    let failure_fraction_l1 = records.iter().filter(|r| r.exceeded_l1()).count() as f64 / n;
    let failure_fraction_l2 = records.iter().filter(|r| r.exceeded_l2()).count() as f64 / n;
    let allowed_failure = cfg.delta + 3.0 * libm::sqrt(cfg.delta * (1.0 - cfg.delta) / n);
    let (mean_error, error_std) = mean_std(records.iter().map(|r| r.error));
    let standard_error = error_std / libm::sqrt(n);
    let mean_z = if standard_error > 0.0 {
        mean_error / standard_error
    } else {
        0.0
    };
    let mean_checked = records
        .iter()
        .any(|r| corpus[r.left].as_ref() != corpus[r.right].as_ref());
    let mean_ok = !mean_checked || mean_error.abs() <= 3.0 * standard_error;
    Ok(VerificationReport {
        params,
        records,
        failure_fraction_l1,
        failure_fraction_l2,
        allowed_failure,
        mean_error,
        error_std,
        mean_z,
        mean_checked,
        passed: failure_fraction_l1 <= allowed_failure && mean_ok,
    })
}

/// Mean and sample standard deviation.
pub fn mean_std(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = xs.clone().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, libm::sqrt(var))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sketch::EmbeddingParams;
    use proptest::prelude::*;

    fn random_dna(rng: &mut ChaCha20Rng, len: usize) -> Vec<u8> {
        (0..len)
            .map(|_| b"ACGT"[uniform_below(rng, 4) as usize])
            .collect()
    }

    #[test]
    fn required_t_examples() {
        assert_eq!(required_t(0.25, 0.1).unwrap().t_required, 74);
        assert_eq!(required_t(0.1, 0.05).unwrap().t_required, 600);
        // 1 / (1 - 1e-9)^2 sits just above 1, so the ceiling is 2; t = 1
        // needs the product itself to be at most 1.
        let half = libm::exp(-0.5);
        assert_eq!(required_t(1.0 - 1e-9, half).unwrap().t_required, 2);
        assert_eq!(required_t(0.9, 0.7).unwrap().t_required, 1);
        assert_eq!(required_t(0.99, 0.99).unwrap().t_required, 1);
        for (e, d) in [
            (0.0, 0.5),
            (1.0, 0.5),
            (0.5, 0.0),
            (0.5, 1.0),
            (f64::NAN, 0.5),
        ] {
            assert!(required_t(e, d).is_err(), "{e} {d}");
        }
    }

    #[test]
    fn epsilon_inversion() {
        let g = required_t(0.25, 0.1).unwrap();
        let eps = epsilon_for(g.t_required, 0.1).unwrap();
        assert!(eps <= 0.25 && eps > 0.24);
    }

    #[test]
    fn cosine_l2_examples() {
        let (c, d) = cosine_and_l2(&[1.0, 0.0], &[1.0, 0.0]).unwrap();
        assert_eq!((c, d), (1.0, 0.0));
        let (c, d) = cosine_and_l2(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert_eq!(c, 0.0);
        assert!((d - libm::sqrt(2.0)).abs() < 1e-15);
        let (c, d) = cosine_and_l2(&[0.6, 0.8], &[-0.6, -0.8]).unwrap();
        assert!((c + 1.0).abs() < 1e-15 && (d - 2.0).abs() < 1e-15);
        assert!(cosine_and_l2(&[1.0, 1.0], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn approx_kernel_basics() {
        let v = SketchVector::from_accumulators(vec![3, -1, 2, 0], 6);
        let z = SketchVector::from_accumulators(vec![0; 4], 0);
        assert_eq!(approx_kernel(&v, &v).unwrap(), (9.0 + 1.0 + 4.0) / 4.0);
        assert_eq!(approx_kernel(&v, &z).unwrap(), 0.0);
        let w = SketchVector::from_accumulators(vec![1; 3], 3);
        assert!(matches!(
            approx_kernel(&v, &w),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn unbiased_on_fixed_pair() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let x = random_dna(&mut rng, 300);
        let y = random_dna(&mut rng, 250);
        let dna = Alphabet::dna();
        let exact = oracle::exact_kernel(&x, &y, 3, &dna).unwrap() as f64;
        let estimates: Vec<f64> = (0..500)
            .map(|i| {
                let fam = HashFamily::sample(64, derive_seed(9, i), Modulus::mersenne61()).unwrap();
                let s = Sketcher::new(dna.clone(), 3, fam).unwrap();
                approx_kernel(&s.embed(&x), &s.embed(&y)).unwrap()
            })
            .collect();
        let (mean, std) = mean_std(estimates.iter().copied());
        assert!((mean - exact).abs() <= 3.0 * std / libm::sqrt(500.0));
        assert!((mean - exact).abs() / exact < 0.05);
    }

    #[test]
    fn gram_small_cases() {
        let params = EmbeddingParams {
            t: 2,
            k: 3,
            seed: 0,
            modulus: crate::hashfamily::MERSENNE_61,
            alphabet: "dna".into(),
        };
        let r = SketchVector::from_accumulators(vec![2, -4], 4);
        let one = EmbeddingMatrix::new(vec!["a".into()], vec![r.clone()], params.clone()).unwrap();
        let g = gram_matrix(&one);
        assert_eq!(g.n(), 1);
        assert!((g.get(0, 0) - 10.0).abs() < 1e-12);
        let two = EmbeddingMatrix::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![r.clone(), SketchVector::from_accumulators(vec![1, 1], 2), r],
            params,
        )
        .unwrap();
        let g = gram_matrix(&two);
        assert_eq!(g.get(0, 2), g.get(0, 0));
        assert!(g.is_symmetric(0.0));
        assert_eq!(g.mode(), KernelMode::Approximate);
    }

    #[test]
    fn exact_gram_matches_kernel() {
        let seqs = [("a", "ACGTAC"), ("b", "CGTACG"), ("c", "TTTT")];
        let g = exact_gram(&seqs, 2, &Alphabet::dna()).unwrap();
        for (i, (_, x)) in seqs.iter().enumerate() {
            for (j, (_, y)) in seqs.iter().enumerate() {
                let k =
                    oracle::exact_kernel(x.as_bytes(), y.as_bytes(), 2, &Alphabet::dna()).unwrap();
                assert_eq!(g.get(i, j), k as f64);
            }
            assert!(g.get(i, i) >= 0.0);
        }
        assert!(exact_gram(&seqs, 13, &Alphabet::dna()).is_err());
    }

    #[test]
    fn verify_rejects_bad_input() {
        let corpus = [b"ACGTACGT".to_vec(), b"TTGACCA".to_vec()];
        let mut cfg = VerifyConfig::new(3, 0.25, 0.1, 99, 1);
        assert!(verify_guarantee(&corpus, &cfg).is_err());
        cfg.trials = 100;
        cfg.k = 13;
        assert!(matches!(
            verify_guarantee(&corpus, &cfg),
            Err(Error::OracleScale { .. })
        ));
        cfg.k = 3;
        assert!(verify_guarantee(&corpus[..1], &cfg).is_err());
        cfg.pair_mode = PairMode::Fixed(0, 2);
        assert!(verify_guarantee(&corpus, &cfg).is_err());
    }

    #[test]
    fn verify_fresh_pairs_passes() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let corpus: Vec<Vec<u8>> = (0..30)
            .map(|_| {
                let len = 200 + uniform_below(&mut rng, 201) as usize;
                random_dna(&mut rng, len)
            })
            .collect();
        let report = verify_guarantee(&corpus, &VerifyConfig::new(3, 0.25, 0.1, 300, 5)).unwrap();
        assert_eq!(report.params.t_required, 74);
        assert_eq!(report.trials(), 300);
        assert!(report.failure_fraction_l1 <= 0.13);
        assert!(report.mean_checked);
        assert!(
            report.passed,
            "{:?}",
            (report.failure_fraction_l1, report.mean_z)
        );
        assert!(report.records.iter().all(|r| r.left != r.right));
    }

    #[test]
    fn verify_loose_epsilon_never_fails() {
        let corpus = [
            b"ACGTTGACGTAGCATGCA".to_vec(),
            b"GGGACGTTTACGACTTAC".to_vec(),
        ];
        let mut cfg = VerifyConfig::new(2, 0.999, 0.5, 100, 8);
        cfg.pair_mode = PairMode::Fixed(0, 1);
        let r = verify_guarantee(&corpus, &cfg).unwrap();
        assert_eq!(r.failure_fraction_l1, 0.0);
    }

    #[test]
    fn verify_self_pair_reports_only() {
        let corpus = [b"ACGTTGACGTAGCATGCAAACG".to_vec()];
        let mut cfg = VerifyConfig::new(3, 0.5, 0.2, 100, 8);
        cfg.pair_mode = PairMode::Fixed(0, 0);
        let r = verify_guarantee(&corpus, &cfg).unwrap();
        assert!(!r.mean_checked);
    }

    #[test]
    fn verify_is_deterministic() {
        let corpus = [
            b"ACGTTGACGTAGCATGCA".to_vec(),
            b"GGGACGTTTACGACTTAC".to_vec(),
            b"AAAAAAAAACCCCC".to_vec(),
        ];
        let cfg = VerifyConfig::new(3, 0.3, 0.1, 120, 77);
        assert_eq!(
            verify_guarantee(&corpus, &cfg).unwrap(),
            verify_guarantee(&corpus, &cfg).unwrap()
        );
    }

    proptest! {
        #[test]
        fn identity_on_normalized_pairs(x in proptest::collection::vec(-10.0f64..10.0, 8), y in proptest::collection::vec(-10.0f64..10.0, 8)) {
            prop_assume!(l2_norm(&x) > 1e-6 && l2_norm(&y) > 1e-6);
            let xu = crate::sketch::normalize(&x).unwrap();
            let yu = crate::sketch::normalize(&y).unwrap();
            let (c, d) = cosine_and_l2(&xu, &yu).unwrap();
            prop_assert!((d * d - (2.0 - 2.0 * c)).abs() <= 1e-9);
            let direct = euclidean(&xu, &yu).unwrap();
            prop_assert!((direct - d).abs() <= 1e-7);
        }

        #[test]
        fn required_t_monotone(e1 in 0.01f64..0.99, e2 in 0.01f64..0.99, d1 in 0.01f64..0.99, d2 in 0.01f64..0.99) {
            let (elo, ehi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
            let (dlo, dhi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
            let t = |e, d| required_t(e, d).unwrap().t_required;
            prop_assert!(t(elo, dhi) >= t(ehi, dhi));
            prop_assert!(t(ehi, dlo) >= t(ehi, dhi));
        }

        #[test]
        fn approx_kernel_symmetric(a in proptest::collection::vec(-500i64..500, 1..40), seed in any::<u64>()) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let b: Vec<i64> = a.iter().map(|_| uniform_below(&mut rng, 1000) as i64 - 500).collect();
            let x = SketchVector::from_accumulators(a, 500);
            let y = SketchVector::from_accumulators(b, 500);
            prop_assert_eq!(approx_kernel(&x, &y).unwrap().to_bits(), approx_kernel(&y, &x).unwrap().to_bits());
        }
    }
}
