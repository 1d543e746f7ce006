//! On-disk formats.
//!
//! Embeddings are written either as CSV (`id,dim_0,...,dim_{t-1}`, preceded by
//! one `#` provenance line) or as `BSV1` binary:
//!
//! ```text
//! "BSV1" | n: u32 | t: u32 | seed: u64 | k: u32 | n*t f64, row-major
//! ```
//!
//! All integers and floats little-endian. Floats in CSV use the shortest text
//! that parses back to the same bits, so the two formats carry identical values.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use seqsketch::classifier::ClassificationMetrics;
use seqsketch::similarity::{KernelMatrix, VerificationReport};
use seqsketch::{EmbeddingMatrix, EmbeddingParams, SketchVector, MERSENNE_61};
use thiserror::Error;

pub const BSV1_MAGIC: &[u8; 4] = b"BSV1";
pub const BSV1_HEADER_LEN: usize = 4 + 4 + 4 + 8 + 4;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("malformed embedding file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Core(#[from] seqsketch::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EmbeddingFormat {
    Csv,
    Binary,
}

fn provenance_line(p: &EmbeddingParams) -> String {
    format!(
        "# seqsketch k={} t={} seed={} p={} alphabet={}",
        p.k, p.t, p.seed, p.modulus, p.alphabet
    )
}

fn parse_provenance(line: &str) -> Option<EmbeddingParams> {
    let rest = line.strip_prefix("# seqsketch")?;
    let mut p = EmbeddingParams {
        t: 0,
        k: 0,
        seed: 0,
        modulus: MERSENNE_61,
        alphabet: String::from("dna"),
    };
    for kv in rest.split_whitespace() {
        let (key, value) = kv.split_once('=')?;
        match key {
            "k" => p.k = value.parse().ok()?,
            "t" => p.t = value.parse().ok()?,
            "seed" => p.seed = value.parse().ok()?,
            "p" => p.modulus = value.parse().ok()?,
            "alphabet" => p.alphabet = value.to_string(),
            _ => {}
        }
    }
    Some(p)
}

pub fn write_embeddings_csv<W: Write>(m: &EmbeddingMatrix, mut out: W) -> Result<(), FormatError> {
    writeln!(out, "{}", provenance_line(m.params()))?;
    let mut w = csv::Writer::from_writer(out);
    let mut header = Vec::with_capacity(m.t() + 1);
    header.push(String::from("id"));
    header.extend((0..m.t()).map(|i| format!("dim_{i}")));
    w.write_record(&header)?;
    let mut record = Vec::with_capacity(m.t() + 1);
    for (id, row) in m.iter() {
        record.clear();
        record.push(id.to_string());
        record.extend(row.scaled().iter().map(|v| v.to_string()));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_embeddings_csv<R: BufRead>(mut input: R) -> Result<EmbeddingMatrix, FormatError> {
    let mut first = String::new();
    input.read_line(&mut first)?;
    let provenance = parse_provenance(first.trim_end());
    let replay = if provenance.is_some() {
        Vec::new()
    } else {
        first.into_bytes()
    };
    let chained = io::Cursor::new(replay).chain(input);
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(chained);
    let header = r.headers()?.clone();
    if header.get(0) != Some("id") {
        return Err(FormatError::Malformed("header must start with `id`".into()));
    }
    let t = header.len() - 1;
    let mut params = provenance.unwrap_or(EmbeddingParams {
        t,
        k: 0,
        seed: 0,
        modulus: MERSENNE_61,
        alphabet: String::from("dna"),
    });
    if params.t != t {
        return Err(FormatError::Malformed(format!(
            "provenance says t={} but header has {t} dimensions",
            params.t
        )));
    }
    params.t = t;
    let mut ids = Vec::new();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        if rec.len() != t + 1 {
            return Err(FormatError::Malformed(format!(
                "row {} has {} fields, expected {}",
                ids.len() + 1,
                rec.len(),
                t + 1
            )));
        }
        ids.push(rec[0].to_string());
        let scaled = rec
            .iter()
            .skip(1)
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| FormatError::Malformed(format!("bad number `{f}`")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(SketchVector::from_scaled(scaled));
    }
    Ok(EmbeddingMatrix::new(ids, rows, params)?)
}

pub fn write_embeddings_bsv1<W: Write>(m: &EmbeddingMatrix, mut out: W) -> Result<(), FormatError> {
    let narrow = |v: usize, what: &str| {
        u32::try_from(v).map_err(|_| FormatError::Malformed(format!("{what} does not fit in u32")))
    };
    out.write_all(BSV1_MAGIC)?;
    out.write_all(&narrow(m.n(), "n")?.to_le_bytes())?;
    out.write_all(&narrow(m.t(), "t")?.to_le_bytes())?;
    out.write_all(&m.params().seed.to_le_bytes())?;
    out.write_all(&narrow(m.params().k, "k")?.to_le_bytes())?;
    for row in m.rows() {
        for v in row.scaled() {
            out.write_all(&v.to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads a `BSV1` stream. The format has no ids, so rows are named by their
/// zero-based index; the modulus is assumed to be 2^61 - 1.
pub fn read_embeddings_bsv1<R: Read>(mut input: R) -> Result<EmbeddingMatrix, FormatError> {
    let mut header = [0u8; BSV1_HEADER_LEN];
    input.read_exact(&mut header)?;
    if &header[..4] != BSV1_MAGIC {
        return Err(FormatError::Malformed("missing BSV1 magic".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(header[o..o + 4].try_into().unwrap());
    let n = u32_at(4) as usize;
    let t = u32_at(8) as usize;
    let seed = u64::from_le_bytes(header[12..20].try_into().unwrap());
    let k = u32_at(20) as usize;
    let mut rows = Vec::with_capacity(n);
    let mut buf = vec![0u8; 8 * t];
    for _ in 0..n {
        input.read_exact(&mut buf)?;
        let scaled = buf
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        rows.push(SketchVector::from_scaled(scaled));
    }
    if input.read(&mut [0u8; 1])? != 0 {
        return Err(FormatError::Malformed(
            "trailing bytes after BSV1 payload".into(),
        ));
    }
    let params = EmbeddingParams {
        t,
        k,
        seed,
        modulus: MERSENNE_61,
        alphabet: String::from("dna"),
    };
    Ok(EmbeddingMatrix::new(
        (0..n).map(|i| i.to_string()).collect(),
        rows,
        params,
    )?)
}

pub fn write_embeddings(
    m: &EmbeddingMatrix,
    path: impl AsRef<Path>,
    format: EmbeddingFormat,
) -> Result<(), FormatError> {
    let out = BufWriter::new(File::create(path)?);
    match format {
        EmbeddingFormat::Csv => write_embeddings_csv(m, out),
        EmbeddingFormat::Binary => write_embeddings_bsv1(m, out),
    }
}

/// Reads either format, chosen by the leading magic bytes.
pub fn read_embeddings(path: impl AsRef<Path>) -> Result<EmbeddingMatrix, FormatError> {
    let mut input = BufReader::new(File::open(path)?);
    if input.fill_buf()?.starts_with(BSV1_MAGIC) {
        read_embeddings_bsv1(input)
    } else {
        read_embeddings_csv(input)
    }
}

pub fn write_kernel_csv<W: Write>(
    km: &KernelMatrix,
    comment: Option<&str>,
    mut out: W,
) -> Result<(), FormatError> {
    if let Some(c) = comment {
        writeln!(out, "# {c}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![String::from("id")];
    header.extend(km.ids().iter().cloned());
    w.write_record(&header)?;
    for (i, id) in km.ids().iter().enumerate() {
        let mut rec = vec![id.clone()];
        rec.extend(km.row(i).iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// One row per trial, then a `#` summary line.
pub fn write_verification_csv<W: Write>(
    report: &VerificationReport,
    mut out: W,
) -> Result<(), FormatError> {
    writeln!(out, "trial,error,bound,exceeded,bound_l2,exceeded_l2")?;
    for r in &report.records {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.trial,
            r.error,
            r.bound_l1,
            r.exceeded_l1(),
            r.bound_l2,
            r.exceeded_l2()
        )?;
    }
    writeln!(out, "# {}", verification_summary(report))?;
    out.flush()?;
    Ok(())
}

pub fn verification_summary(report: &VerificationReport) -> String {
    format!(
        "epsilon={} delta={} t={} trials={} failure_l1={} failure_l2={} allowed={:.6} mean_error={} mean_z={:.3} mean_checked={} result={}",
        report.params.epsilon,
        report.params.delta,
        report.params.t_required,
        report.trials(),
        report.failure_fraction_l1,
        report.failure_fraction_l2,
        report.allowed_failure,
        report.mean_error,
        report.mean_z,
        report.mean_checked,
        if report.passed { "pass" } else { "fail" },
    )
}

pub const METRICS_HEADER: &str = "accuracy,precision,recall,f1_weighted,f1_macro,train_time_s";

/// Header plus a single row; precision and recall are support-weighted.
pub fn write_metrics_csv<W: Write>(
    m: &ClassificationMetrics,
    train_seconds: f64,
    mut out: W,
) -> io::Result<()> {
    writeln!(out, "{METRICS_HEADER}")?;
    writeln!(
        out,
        "{},{},{},{},{},{}",
        m.accuracy,
        m.precision_weighted,
        m.recall_weighted,
        m.f1_weighted,
        m.f1_macro,
        train_seconds
    )?;
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use seqsketch::{Alphabet, HashFamily, Modulus, Sketcher};

    fn matrix(n: usize, t: usize) -> EmbeddingMatrix {
        let s = Sketcher::new(
            Alphabet::dna(),
            3,
            HashFamily::sample(t, 9, Modulus::mersenne61()).unwrap(),
        )
        .unwrap();
        let seqs: Vec<(String, String)> = (0..n)
            .map(|i| {
                (
                    format!("seq,{i}"),
                    (0..(30 + 13 * i))
                        .map(|j| ['A', 'C', 'G', 'T'][(j * j + i) % 4])
                        .collect(),
                )
            })
            .collect();
        s.embed_batch(&seqs).unwrap()
    }

    fn same_values(a: &EmbeddingMatrix, b: &EmbeddingMatrix) {
        assert_eq!(a.n(), b.n());
        assert_eq!(a.t(), b.t());
        for (x, y) in a.rows().iter().zip(b.rows()) {
            let xb: Vec<u64> = x.scaled().iter().map(|v| v.to_bits()).collect();
            let yb: Vec<u64> = y.scaled().iter().map(|v| v.to_bits()).collect();
            assert_eq!(xb, yb);
            assert_eq!(x.accumulators(), y.accumulators());
        }
    }

    #[test]
    fn csv_round_trip() {
        let m = matrix(5, 37);
        let mut buf = Vec::new();
        write_embeddings_csv(&m, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# seqsketch k=3 t=37 seed=9 "));
        assert!(text.lines().nth(1).unwrap().starts_with("id,dim_0,dim_1,"));
        let back = read_embeddings_csv(&buf[..]).unwrap();
        same_values(&m, &back);
        assert_eq!(back.ids(), m.ids());
        assert_eq!(back.params(), m.params());
    }

    #[test]
    fn bsv1_layout_and_round_trip() {
        for (n, t) in [(0, 7), (3, 16), (4, 1)] {
            let m = matrix(n, t);
            let mut buf = Vec::new();
            write_embeddings_bsv1(&m, &mut buf).unwrap();
            assert_eq!(buf.len(), 4 + 4 + 4 + 8 + 4 + 8 * n * t);
            assert_eq!(&buf[..4], b"BSV1");
            assert_eq!(u32::from_le_bytes(buf[4..8].try_into().unwrap()), n as u32);
            assert_eq!(u32::from_le_bytes(buf[8..12].try_into().unwrap()), t as u32);
            assert_eq!(u64::from_le_bytes(buf[12..20].try_into().unwrap()), 9);
            assert_eq!(u32::from_le_bytes(buf[20..24].try_into().unwrap()), 3);
            let back = read_embeddings_bsv1(&buf[..]).unwrap();
            same_values(&m, &back);
        }
    }

    #[test]
    fn csv_to_binary_to_csv_preserves_values() {
        let m = matrix(6, 50);
        let mut csv_buf = Vec::new();
        write_embeddings_csv(&m, &mut csv_buf).unwrap();
        let from_csv = read_embeddings_csv(&csv_buf[..]).unwrap();
        let mut bin = Vec::new();
        write_embeddings_bsv1(&from_csv, &mut bin).unwrap();
        let from_bin = read_embeddings_bsv1(&bin[..]).unwrap();
        same_values(&m, &from_bin);
    }

    #[test]
    fn empty_corpus_csv() {
        let m = matrix(0, 4);
        let mut buf = Vec::new();
        write_embeddings_csv(&m, &mut buf).unwrap();
        let back = read_embeddings_csv(&buf[..]).unwrap();
        assert_eq!((back.n(), back.t()), (0, 4));
    }

    #[test]
    fn malformed_inputs() {
        assert!(
            read_embeddings_bsv1(&b"BSV2\0\0\0\0\0\0\0\0\0\0\0\0\0\0\0\0\0\0\0\0"[..]).is_err()
        );
        assert!(read_embeddings_bsv1(&b"BSV1"[..]).is_err());
        assert!(read_embeddings_csv(&b"name,dim_0\na,1\n"[..]).is_err());
        assert!(read_embeddings_csv(&b"id,dim_0\na,x\n"[..]).is_err());
        let plain = read_embeddings_csv(&b"id,dim_0,dim_1\na,1,2\n"[..]).unwrap();
        assert_eq!(plain.rows()[0].scaled(), [1.0, 2.0]);
    }
}
