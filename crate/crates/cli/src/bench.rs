//! Throughput and scaling measurements for single-sequence embedding.

use std::time::Instant;

use seqsketch::{Alphabet, HashFamily, Modulus, Sketcher};

use crate::alloc_track::PeakTracker;
use crate::synth;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub t: usize,
    pub k: usize,
    pub lengths: Vec<usize>,
    pub t_values: Vec<usize>,
    /// Sequence length used for the `t` sweep and the memory probe.
    pub fixed_length: usize,
    pub repeats: usize,
    pub seed: u64,
    /// Two k values whose peak embedding memory is compared.
    pub memory_ks: (usize, usize),
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            t: 1000,
            k: 3,
            lengths: vec![1000, 2000, 4000, 8000, 16000],
            t_values: vec![250, 500, 1000, 2000, 4000],
            fixed_length: 4000,
            repeats: 5,
            seed: 42,
            memory_ks: (3, 10),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares of `y` on `x`.
pub fn linear_fit(points: &[(f64, f64)]) -> Fit {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Fit {
        slope,
        intercept,
        r2,
    }
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub config: BenchConfig,
    /// `(length, best seconds)` at fixed `t`.
    pub length_sweep: Vec<(usize, f64)>,
    /// `(t, best seconds)` at fixed length.
    pub t_sweep: Vec<(usize, f64)>,
    pub length_fit: Fit,
    pub t_fit: Fit,
    pub sequences_per_second: f64,
    pub chars_per_second: f64,
    /// Peak heap bytes while embedding at each of `memory_ks`; zero unless the
    /// tracking allocator is installed.
    pub memory: [(usize, usize); 2],
}

impl BenchReport {
    pub fn memory_relative_difference(&self) -> f64 {
        let (a, b) = (self.memory[0].1 as f64, self.memory[1].1 as f64);
        if a.max(b) == 0.0 {
            0.0
        } else {
            (a - b).abs() / a.max(b)
        }
    }
}

fn sketcher(t: usize, k: usize, seed: u64) -> Sketcher {
    let family = HashFamily::sample(t, seed, Modulus::mersenne61()).expect("t >= 1");
    Sketcher::new(Alphabet::dna(), k, family).expect("k fits the modulus")
}

fn best_time(s: &Sketcher, seq: &[u8], repeats: usize) -> f64 {
    (0..repeats.max(1))
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(s.embed(std::hint::black_box(seq)));
            start.elapsed().as_secs_f64()
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn run(cfg: &BenchConfig) -> BenchReport {
    let mut rng = synth::rng(cfg.seed);
    let s = sketcher(cfg.t, cfg.k, cfg.seed);

    let mut length_sweep = Vec::new();
    let mut total_secs = 0.0;
    let mut total_chars = 0usize;
    for &len in &cfg.lengths {
        let seq = synth::random_dna(&mut rng, len);
        // Warm up caches and the branch predictor once per length.
        std::hint::black_box(s.embed(&seq));
        let secs = best_time(&s, &seq, cfg.repeats);
        total_secs += secs;
        total_chars += len;
        length_sweep.push((len, secs));
    }

    let fixed = synth::random_dna(&mut rng, cfg.fixed_length);
    let t_sweep: Vec<(usize, f64)> = cfg
        .t_values
        .iter()
        .map(|&t| {
            let st = sketcher(t, cfg.k, cfg.seed);
            std::hint::black_box(st.embed(&fixed));
            (t, best_time(&st, &fixed, cfg.repeats))
        })
        .collect();

    let memory = [cfg.memory_ks.0, cfg.memory_ks.1].map(|k| {
        let st = sketcher(cfg.t, k, cfg.seed);
        let (_, bytes) = PeakTracker::measure(|| std::hint::black_box(st.embed(&fixed)));
        (k, bytes)
    });

    let as_points = |v: &[(usize, f64)]| v.iter().map(|&(x, y)| (x as f64, y)).collect::<Vec<_>>();
    BenchReport {
        length_fit: linear_fit(&as_points(&length_sweep)),
        t_fit: linear_fit(&as_points(&t_sweep)),
        sequences_per_second: cfg.lengths.len() as f64 / total_secs,
        chars_per_second: total_chars as f64 / total_secs,
        length_sweep,
        t_sweep,
        memory,
        config: cfg.clone(),
    }
}
