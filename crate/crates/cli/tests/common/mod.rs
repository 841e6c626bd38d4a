#![allow(dead_code)]

use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use topicatlas::corpus::write_records;
use topicatlas::inference::{generate_corpus, sample_params};

pub const BIN: &str = env!("CARGO_BIN_EXE_topicatlas");

/// A synthetic citation network as ingestible records: 60 documents and 30
/// terms. Every fourth document has fewer than three links, so a link
/// filter bites.
pub fn write_network(path: &Path, seed: u64) {
    let truth = sample_params(3, 3, 30, 60, 0.1, 1.0, seed).unwrap();
    let words = vec![40; 60];
    let links: Vec<usize> = (0..60).map(|i| if i % 4 == 0 { i % 3 } else { 6 + i % 5 }).collect();
    let corpus = generate_corpus(&truth, &words, &links, seed).unwrap();
    write_records(&corpus, File::create(path).unwrap()).unwrap();
}

pub fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

pub fn run_ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Records, a trained model and an exported graph in one temporary
/// directory.
pub struct Fixture {
    pub dir: tempfile::TempDir,
    pub records: PathBuf,
    pub train_dir: PathBuf,
    pub graph: PathBuf,
}

impl Fixture {
    pub fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let records = dir.path().join("records.jsonl");
        write_network(&records, 21);
        let train_dir = dir.path().join("train");
        let web_dir = dir.path().join("web");
        run_ok(&[
            "train",
            s(&records),
            "--out",
            s(&train_dir),
            "--kw",
            "3",
            "--ky",
            "3",
            "--min-count",
            "1",
            "--outer-iters",
            "8",
            "--seed",
            "7",
        ]);
        run_ok(&[
            "export-web",
            "--model",
            s(&train_dir.join("model.json")),
            "--corpus",
            s(&train_dir.join("corpus.dump")),
            "--out",
            s(&web_dir),
        ]);
        Self {
            graph: web_dir.join("graph.json"),
            dir,
            records,
            train_dir,
        }
    }

    pub fn model(&self) -> PathBuf {
        self.train_dir.join("model.json")
    }

    pub fn dump(&self) -> PathBuf {
        self.train_dir.join("corpus.dump")
    }
}
