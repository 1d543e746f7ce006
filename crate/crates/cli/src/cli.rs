//! Command-line surface: `embed`, `kernel`, `verify`, `knn`, `bench`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use seqsketch::classifier::{self, LabeledEmbeddings, Metric};
use seqsketch::similarity::{self, PairMode, VerifyConfig};
use seqsketch::{Alphabet, EmbeddingMatrix, HashFamily, Modulus, Sketcher, MERSENNE_61};
use thiserror::Error;

use crate::bench::{self, BenchConfig};
use crate::fasta::{parse_fasta, FastaRecord};
use crate::formats::{self, EmbeddingFormat, BSV1_MAGIC};
use crate::synth;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Minimum R² for the linear-scaling fits reported by `bench`.
pub const BENCH_MIN_R2: f64 = 0.98;
/// Largest relative peak-memory difference `bench` tolerates between its two k values.
pub const BENCH_MAX_MEMORY_DIFF: f64 = 0.10;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] anyhow::Error),
    #[error("{0}")]
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Check(_) => EXIT_VERIFY,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "seqsketch",
    version,
    about = "Sketch embeddings for the k-mer spectrum kernel"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Embed every record of a FASTA file.
    Embed(EmbedArgs),
    /// Pairwise kernel matrix from embeddings or FASTA.
    Kernel(KernelArgs),
    /// Monte Carlo check of the sketch accuracy guarantee.
    Verify(VerifyArgs),
    /// k-nearest-neighbour classification of labelled FASTA records.
    Knn(KnnArgs),
    /// Embedding throughput and scaling report.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SketchArgs {
    /// k-mer length.
    #[arg(long, default_value_t = seqsketch::sketch::DEFAULT_K)]
    pub k: usize,
    /// Embedding dimension (number of hash functions).
    #[arg(long, default_value_t = seqsketch::sketch::DEFAULT_T)]
    pub t: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// `dna` or `protein`.
    #[arg(long, default_value = "dna")]
    pub alphabet: String,
    /// Prime modulus of the hash polynomials.
    #[arg(long, default_value_t = MERSENNE_61)]
    pub modulus: u64,
}

/// Validated parameters of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub k: usize,
    pub t: usize,
    pub seed: u64,
    pub modulus: Modulus,
    pub alphabet: Alphabet,
}

impl SketchArgs {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let alphabet = parse_alphabet(&self.alphabet)?;
        let modulus = Modulus::new(self.modulus).map_err(usage)?;
        if self.t == 0 {
            return Err(usage("--t must be at least 1"));
        }
        seqsketch::KmerEncoder::new(alphabet.clone(), self.k, modulus).map_err(usage)?;
        Ok(RunConfig {
            k: self.k,
            t: self.t,
            seed: self.seed,
            modulus,
            alphabet,
        })
    }
}

impl RunConfig {
    pub fn sketcher(&self) -> Result<Sketcher, CliError> {
        let family = HashFamily::sample(self.t, self.seed, self.modulus).map_err(usage)?;
        Sketcher::new(self.alphabet.clone(), self.k, family).map_err(usage)
    }
}

fn parse_alphabet(name: &str) -> Result<Alphabet, CliError> {
    Alphabet::by_name(name)
        .ok_or_else(|| usage(format!("unknown alphabet `{name}` (dna, protein)")))
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// FASTA input.
    pub input: PathBuf,
    #[command(flatten)]
    pub sketch: SketchArgs,
    #[arg(long, short)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = EmbeddingFormat::Csv)]
    pub format: EmbeddingFormat,
    /// With --delta, refuse to run unless t meets the dimension required for this accuracy.
    #[arg(long, requires = "delta")]
    pub epsilon: Option<f64>,
    #[arg(long, requires = "epsilon")]
    pub delta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Embedding file (CSV or BSV1) or FASTA.
    pub input: PathBuf,
    /// Exact spectrum kernel from FASTA instead of sketch inner products.
    #[arg(long)]
    pub exact: bool,
    #[command(flatten)]
    pub sketch: SketchArgs,
    /// Failure probability used to report the accuracy of an approximate matrix.
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Defaults to standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairsArg {
    Fresh,
    Fixed,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// FASTA corpus; a seeded random DNA corpus is generated when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value = "dna")]
    pub alphabet: String,
    #[arg(long, value_enum, default_value_t = PairsArg::Fresh)]
    pub pairs: PairsArg,
    /// Size of the generated corpus.
    #[arg(long, default_value_t = 100)]
    pub corpus_size: usize,
    #[arg(long, default_value_t = 200)]
    pub min_len: usize,
    #[arg(long, default_value_t = 400)]
    pub max_len: usize,
    /// Per-trial CSV report.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Euclidean,
    Cosine,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Metric {
        match m {
            MetricArg::Euclidean => Metric::Euclidean,
            MetricArg::Cosine => Metric::Cosine,
        }
    }
}

#[derive(Debug, Args)]
pub struct KnnArgs {
    /// Labelled FASTA (`>id|label`).
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long, default_value_t = 5)]
    pub neighbors: usize,
    #[arg(long, value_enum, default_value_t = MetricArg::Cosine)]
    pub metric: MetricArg,
    #[command(flatten)]
    pub sketch: SketchArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 1000)]
    pub t: usize,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [1000, 2000, 4000, 8000, 16000])]
    pub lengths: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [250, 500, 1000, 2000, 4000])]
    pub t_values: Vec<usize>,
    #[arg(long, default_value_t = 4000)]
    pub fixed_length: usize,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

/// Parses `argv` and runs the command; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e:#}");
            e.exit_code()
        }
    }
}

pub fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Embed(a) => embed(a),
        Command::Kernel(a) => kernel(a),
        Command::Verify(a) => verify(a),
        Command::Knn(a) => knn(a),
        Command::Bench(a) => run_bench(a),
    }
}

fn output_writer(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_records(path: &Path) -> Result<Vec<FastaRecord>, CliError> {
    Ok(parse_fasta(path).map_err(anyhow::Error::from)?)
}

fn embed_records(s: &Sketcher, records: &[FastaRecord]) -> Result<EmbeddingMatrix, CliError> {
    let pairs: Vec<(&str, &[u8])> = records
        .iter()
        .map(|r| (r.id.as_str(), r.sequence.as_slice()))
        .collect();
    let m = s.embed_batch(&pairs).map_err(anyhow::Error::from)?;
    for (id, row) in m.iter() {
        if row.is_empty() {
            warn!(
                "`{id}` has no valid {}-mer; its embedding is all zeros",
                s.k()
            );
        }
    }
    Ok(m)
}

fn embed(a: EmbedArgs) -> Result<(), CliError> {
    let cfg = a.sketch.resolve()?;
    if let (Some(eps), Some(delta)) = (a.epsilon, a.delta) {
        let g = similarity::required_t(eps, delta).map_err(usage)?;
        if cfg.t < g.t_required {
            return Err(usage(format!(
                "t={} is below the {} dimensions required for epsilon={eps}, delta={delta}",
                cfg.t, g.t_required
            )));
        }
    }
    let records = read_records(&a.input)?;
    let s = cfg.sketcher()?;
    let m = embed_records(&s, &records)?;
    formats::write_embeddings(&m, &a.output, a.format)
        .with_context(|| format!("writing {}", a.output.display()))?;
    info!(
        "embedded {} sequences (k={}, t={}, seed={}) into {}",
        m.n(),
        cfg.k,
        cfg.t,
        cfg.seed,
        a.output.display()
    );
    Ok(())
}

enum KernelInput {
    Fasta,
    Embeddings,
}

fn sniff(path: &Path) -> Result<KernelInput, CliError> {
    let mut head = Vec::new();
    File::open(path)
        .with_context(|| format!("opening {}", path.display()))?
        .take(256)
        .read_to_end(&mut head)
        .context("reading input")?;
    if head.starts_with(BSV1_MAGIC) {
        return Ok(KernelInput::Embeddings);
    }
    let first = BufReader::new(&head[..])
        .lines()
        .map_while(Result::ok)
        .find(|l| !l.trim().is_empty());
    Ok(match first {
        Some(l) if l.trim_start().starts_with('>') => KernelInput::Fasta,
        _ => KernelInput::Embeddings,
    })
}

fn kernel(a: KernelArgs) -> Result<(), CliError> {
    let input = sniff(&a.input)?;
    let (km, comment) = match (input, a.exact) {
        (KernelInput::Embeddings, true) => {
            return Err(usage("--exact needs FASTA input"));
        }
        (KernelInput::Fasta, true) => {
            let alphabet = parse_alphabet(&a.sketch.alphabet)?;
            let records = read_records(&a.input)?;
            let pairs: Vec<(&str, &[u8])> = records
                .iter()
                .map(|r| (r.id.as_str(), r.sequence.as_slice()))
                .collect();
            let km = similarity::exact_gram(&pairs, a.sketch.k, &alphabet).map_err(usage)?;
            (km, format!("exact k={}", a.sketch.k))
        }
        (kind, false) => {
            let m = match kind {
                KernelInput::Fasta => {
                    let cfg = a.sketch.resolve()?;
                    embed_records(&cfg.sketcher()?, &read_records(&a.input)?)?
                }
                KernelInput::Embeddings => formats::read_embeddings(&a.input)
                    .with_context(|| format!("reading {}", a.input.display()))?,
            };
            let p = m.params();
            let eps = similarity::epsilon_for(p.t, a.delta).map_err(usage)?;
            let comment = format!(
                "approximate k={} t={} seed={} epsilon={eps} delta={}",
                p.k, p.t, p.seed, a.delta
            );
            (similarity::gram_matrix(&m), comment)
        }
    };
    let out = output_writer(a.output.as_deref())?;
    formats::write_kernel_csv(&km, Some(&comment), out).context("writing kernel matrix")?;
    Ok(())
}

fn verify(a: VerifyArgs) -> Result<(), CliError> {
    let alphabet = parse_alphabet(&a.alphabet)?;
    let corpus: Vec<Vec<u8>> = match &a.input {
        Some(p) => read_records(p)?.into_iter().map(|r| r.sequence).collect(),
        None => {
            if a.min_len > a.max_len || a.corpus_size < 2 {
                return Err(usage(
                    "generated corpus needs min-len <= max-len and at least 2 sequences",
                ));
            }
            synth::random_corpus(a.corpus_size, a.min_len, a.max_len, a.seed)
        }
    };
    let mut cfg = VerifyConfig::new(a.k, a.epsilon, a.delta, a.trials, a.seed);
    cfg.alphabet = alphabet;
    cfg.pair_mode = match a.pairs {
        PairsArg::Fresh => PairMode::Fresh,
        PairsArg::Fixed => PairMode::Fixed(0, 1.min(corpus.len().saturating_sub(1))),
    };
    let report = similarity::verify_guarantee(&corpus, &cfg).map_err(|e| match e {
        seqsketch::Error::InvalidInput(_) => CliError::Data(anyhow!(e)),
        other => usage(other),
    })?;
    if let Some(path) = &a.output {
        let out = BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        );
        formats::write_verification_csv(&report, out).context("writing verification report")?;
    }
    let summary = formats::verification_summary(&report);
    println!("{summary}");
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Check(format!("verification failed: {summary}")))
    }
}

fn labeled(s: &Sketcher, records: &[FastaRecord]) -> Result<LabeledEmbeddings, CliError> {
    let labels = records
        .iter()
        .map(|r| {
            r.label()
                .map(String::from)
                .ok_or_else(|| anyhow!("record `{}` carries no label (expected `>id|label`)", r.id))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let m = embed_records(s, records)?;
    Ok(LabeledEmbeddings::new(m, labels).map_err(anyhow::Error::from)?)
}

fn knn(a: KnnArgs) -> Result<(), CliError> {
    let cfg = a.sketch.resolve()?;
    let s = cfg.sketcher()?;
    let start = Instant::now();
    let train = labeled(&s, &read_records(&a.train)?)?;
    let train_secs = start.elapsed().as_secs_f64();
    if train.n() == 0 {
        return Err(CliError::Data(anyhow!("training set is empty")));
    }
    if a.neighbors == 0 || a.neighbors > train.n() {
        return Err(usage(format!("--neighbors must lie in 1..={}", train.n())));
    }
    let test = labeled(&s, &read_records(&a.test)?)?;
    let metrics = classifier::evaluate(&train, &test, a.neighbors, a.metric.into())
        .map_err(anyhow::Error::from)?;
    let out = output_writer(a.output.as_deref())?;
    formats::write_metrics_csv(&metrics, train_secs, out).context("writing metrics")?;
    Ok(())
}

fn run_bench(a: BenchArgs) -> Result<(), CliError> {
    if a.t == 0 || a.lengths.len() < 2 || a.t_values.len() < 2 || a.t_values.contains(&0) {
        return Err(usage(
            "bench needs t >= 1 and at least two lengths and two t values",
        ));
    }
    let alphabet = Alphabet::dna();
    for k in [a.k, 10] {
        seqsketch::KmerEncoder::new(alphabet.clone(), k, Modulus::mersenne61()).map_err(usage)?;
    }
    let cfg = BenchConfig {
        t: a.t,
        k: a.k,
        lengths: a.lengths,
        t_values: a.t_values,
        fixed_length: a.fixed_length,
        repeats: a.repeats,
        seed: a.seed,
        memory_ks: (a.k, 10),
    };
    let r = bench::run(&cfg);
    let mut out = io::stdout().lock();
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").context("writing report");
    w(
        &mut out,
        format!("# length sweep at t={}, k={}", cfg.t, cfg.k),
    )?;
    for (len, secs) in &r.length_sweep {
        w(&mut out, format!("length={len} seconds={secs:.6}"))?;
    }
    w(
        &mut out,
        format!("# t sweep at length={}", cfg.fixed_length),
    )?;
    for (t, secs) in &r.t_sweep {
        w(&mut out, format!("t={t} seconds={secs:.6}"))?;
    }
    w(
        &mut out,
        format!("sequences_per_second={:.2}", r.sequences_per_second),
    )?;
    w(
        &mut out,
        format!("chars_per_second={:.0}", r.chars_per_second),
    )?;
    w(
        &mut out,
        format!("r2_length={:.5} r2_t={:.5}", r.length_fit.r2, r.t_fit.r2),
    )?;
    w(
        &mut out,
        format!(
            "peak_heap_bytes k={}:{} k={}:{} relative_difference={:.4}",
            r.memory[0].0,
            r.memory[0].1,
            r.memory[1].0,
            r.memory[1].1,
            r.memory_relative_difference()
        ),
    )?;
    let mut failures = Vec::new();
    if r.length_fit.r2 < BENCH_MIN_R2 {
        failures.push(format!(
            "time vs length R^2 {:.4} < {BENCH_MIN_R2}",
            r.length_fit.r2
        ));
    }
    if r.t_fit.r2 < BENCH_MIN_R2 {
        failures.push(format!("time vs t R^2 {:.4} < {BENCH_MIN_R2}", r.t_fit.r2));
    }
    if r.memory_relative_difference() >= BENCH_MAX_MEMORY_DIFF {
        failures.push(format!(
            "peak memory differs by {:.1}% between k={} and k={}",
            100.0 * r.memory_relative_difference(),
            r.memory[0].0,
            r.memory[1].0
        ));
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Check(failures.join("; ")))
    }
}
