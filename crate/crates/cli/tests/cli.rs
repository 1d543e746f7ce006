use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use seqsketch::similarity::epsilon_for;
use seqsketch_cli::synth;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_seqsketch"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn seqsketch")
}

fn write_fasta(dir: &Path, name: &str, records: &[(String, Vec<u8>)]) -> PathBuf {
    let path = dir.join(name);
    let mut text = String::new();
    for (id, seq) in records {
        text.push_str(&format!(">{id}\n{}\n", String::from_utf8_lossy(seq)));
    }
    std::fs::write(&path, text).unwrap();
    path
}

fn random_fasta(dir: &Path, n: usize, seed: u64) -> PathBuf {
    let records: Vec<_> = synth::random_corpus(n, 200, 400, seed)
        .into_iter()
        .enumerate()
        .map(|(i, s)| (format!("s{i}"), s))
        .collect();
    write_fasta(dir, "random.fa", &records)
}

/// Parses a kernel CSV into a row-major square matrix.
fn parse_kernel(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').skip(1).map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn embed_writes_provenance_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let fa = write_fasta(
        dir.path(),
        "two.fa",
        &[
            ("a".into(), b"ACGTACGT".to_vec()),
            ("b".into(), b"ACGA".to_vec()),
        ],
    );
    let csv = dir.path().join("two.csv");
    let out = run(&[
        "embed",
        fa.to_str().unwrap(),
        "--k",
        "3",
        "--t",
        "8",
        "--seed",
        "42",
        "-o",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(csv).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert!(lines[0].starts_with("# seqsketch k=3 t=8 seed=42"));
    assert_eq!(lines.len(), 4);
    assert!(lines[2].starts_with("a,"));
    assert_eq!(lines[2].split(',').count(), 9);
}

#[test]
fn embed_binary_has_expected_size() {
    let dir = tempfile::tempdir().unwrap();
    let fa = random_fasta(dir.path(), 5, 1);
    let bin_path = dir.path().join("e.bsv");
    let out = run(&[
        "embed",
        fa.to_str().unwrap(),
        "--t",
        "64",
        "--format",
        "binary",
        "-o",
        bin_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::metadata(&bin_path).unwrap().len(), 24 + 8 * 5 * 64);
}

#[test]
fn embed_rejects_t_below_guarantee() {
    let dir = tempfile::tempdir().unwrap();
    let fa = random_fasta(dir.path(), 2, 2);
    let f = fa.to_str().unwrap();
    let o = dir.path().join("e.csv");
    let o = o.to_str().unwrap();
    let low = run(&[
        "embed",
        f,
        "-o",
        o,
        "--t",
        "50",
        "--epsilon",
        "0.25",
        "--delta",
        "0.1",
    ]);
    assert_eq!(low.status.code(), Some(1));
    let ok = run(&[
        "embed",
        f,
        "-o",
        o,
        "--t",
        "74",
        "--epsilon",
        "0.25",
        "--delta",
        "0.1",
    ]);
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );
}

#[test]
fn approximate_kernel_tracks_exact_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let fa = random_fasta(dir.path(), 20, 3);
    let f = fa.to_str().unwrap();
    let exact = run(&["kernel", f, "--exact", "--k", "3"]);
    let approx = run(&["kernel", f, "--k", "3", "--t", "4096", "--seed", "7"]);
    assert_eq!(exact.status.code(), Some(0));
    assert_eq!(approx.status.code(), Some(0));
    let e = parse_kernel(&String::from_utf8(exact.stdout).unwrap());
    let a = parse_kernel(&String::from_utf8(approx.stdout).unwrap());
    assert_eq!(e.len(), 20);
    let eps = epsilon_for(4096, 0.1).unwrap();
    let mut within = 0;
    let mut total = 0;
    for i in 0..20 {
        for j in 0..20 {
            let bound = eps * (e[i][i] * e[j][j]).sqrt();
            within += usize::from((a[i][j] - e[i][j]).abs() <= bound);
            total += 1;
        }
    }
    assert!(within as f64 >= 0.9 * total as f64, "{within}/{total}");
}

#[test]
fn kernel_reads_saved_embeddings() {
    let dir = tempfile::tempdir().unwrap();
    let fa = random_fasta(dir.path(), 4, 4);
    let csv = dir.path().join("e.csv");
    let bsv = dir.path().join("e.bsv");
    let f = fa.to_str().unwrap();
    assert!(run(&["embed", f, "--t", "32", "-o", csv.to_str().unwrap()])
        .status
        .success());
    assert!(run(&[
        "embed",
        f,
        "--t",
        "32",
        "--format",
        "binary",
        "-o",
        bsv.to_str().unwrap()
    ])
    .status
    .success());
    let from_fasta =
        parse_kernel(&String::from_utf8(run(&["kernel", f, "--t", "32"]).stdout).unwrap());
    for saved in [&csv, &bsv] {
        let out = run(&["kernel", saved.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        let m = parse_kernel(&String::from_utf8(out.stdout).unwrap());
        for (r, s) in m.iter().zip(&from_fasta) {
            for (x, y) in r.iter().zip(s) {
                assert!((x - y).abs() <= 1e-9 * y.abs().max(1.0));
            }
        }
    }
    let exact_from_csv = run(&["kernel", csv.to_str().unwrap(), "--exact"]);
    assert_eq!(exact_from_csv.status.code(), Some(1));
}

#[test]
fn verify_passes_with_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("v.csv");
    let out = run(&["verify", "--trials", "200", "-o", report.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(report).unwrap();
    assert!(text.starts_with("trial,error,bound,exceeded,bound_l2,exceeded_l2\n"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 201);
    assert!(text
        .lines()
        .any(|l| l.starts_with("# epsilon=") && l.ends_with("result=pass")));
}

#[test]
fn knn_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let spec = synth::MotifSpec {
        per_class: 30,
        ..Default::default()
    };
    let data = synth::motif_dataset(&spec, 11);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (i, d) in data.into_iter().enumerate() {
        let rec = (format!("{}|{}", d.id, d.label), d.sequence);
        if i % 4 == 0 {
            test.push(rec)
        } else {
            train.push(rec)
        }
    }
    let tr = write_fasta(dir.path(), "train.fa", &train);
    let te = write_fasta(dir.path(), "test.fa", &test);
    let out = run(&[
        "knn",
        "--train",
        tr.to_str().unwrap(),
        "--test",
        te.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("accuracy,precision,recall,f1_weighted,f1_macro,train_time_s")
    );
    let acc: f64 = lines
        .next()
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(acc >= 0.9, "accuracy {acc}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().join("out.csv");
    let o = o.to_str().unwrap();
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(
        run(&["embed", "-o", o, "/nonexistent/x.fa"]).status.code(),
        Some(2)
    );
    let empty = dir.path().join("empty.fa");
    std::fs::write(&empty, "").unwrap();
    let out = run(&["embed", "-o", o, empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no FASTA records"));
    let junk = dir.path().join("junk.fa");
    std::fs::write(&junk, "ACGT\n>a\nACGT\n").unwrap();
    assert_eq!(
        run(&["embed", "-o", o, junk.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let fa = random_fasta(dir.path(), 2, 5);
    assert_eq!(
        run(&["embed", "-o", o, fa.to_str().unwrap(), "--k", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["embed", "-o", o, fa.to_str().unwrap(), "--alphabet", "rna"])
            .status
            .code(),
        Some(1)
    );
}
