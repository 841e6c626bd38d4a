mod common;

use std::fs;

use common::{run, run_ok, s, Fixture};
use topicatlas::topicweb::parse_graph;

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["train"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["export-web", "--prior", "-1"]).status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.jsonl");
    let out = run(&["train", s(&missing), "--out", s(&dir.path().join("o"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn train_is_reproducible_and_writes_its_outputs() {
    let f = Fixture::new();
    let again = f.dir.path().join("again");
    run_ok(&[
        "train",
        s(&f.records),
        "--out",
        s(&again),
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
    assert_eq!(
        fs::read(f.model()).unwrap(),
        fs::read(again.join("model.json")).unwrap()
    );
    for name in ["model.json", "elbo.csv", "corpus.dump", "manifest.json"] {
        assert!(again.join(name).is_file(), "{name}");
    }
    let elbo = fs::read_to_string(again.join("elbo.csv")).unwrap();
    assert!(elbo.starts_with("iteration,elbo\n"));
    assert!(elbo.lines().count() >= 2);

    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(again.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "train");
    assert_eq!(manifest["seed"], 7);
}

#[test]
fn export_accepts_records_and_dump_alike() {
    let f = Fixture::new();
    let from_records = f.dir.path().join("web2");
    run_ok(&[
        "export-web",
        "--model",
        s(&f.model()),
        "--corpus",
        s(&f.records),
        "--out",
        s(&from_records),
    ]);
    assert_eq!(
        fs::read(&f.graph).unwrap(),
        fs::read(from_records.join("graph.json")).unwrap()
    );
}

#[test]
fn export_refuses_a_different_corpus() {
    let f = Fixture::new();
    let other = f.dir.path().join("other.jsonl");
    common::write_network(&other, 99);
    let out = run(&[
        "export-web",
        "--model",
        s(&f.model()),
        "--corpus",
        s(&other),
        "--out",
        s(&f.dir.path().join("x")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not the corpus the model was trained on"));
    // the same records under a different link filter are a different corpus too
    let out = run(&[
        "export-web",
        "--model",
        s(&f.model()),
        "--corpus",
        s(&f.records),
        "--min-links",
        "3",
        "--out",
        s(&f.dir.path().join("y")),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn zero_threshold_keeps_every_edge() {
    let f = Fixture::new();
    let out = f.dir.path().join("full");
    run_ok(&[
        "export-web",
        "--model",
        s(&f.model()),
        "--corpus",
        s(&f.dump()),
        "--out",
        s(&out),
        "--threshold",
        "0",
        "--prior",
        "auto",
    ]);
    let g = parse_graph(&fs::read(out.join("graph.json")).unwrap()).unwrap();
    assert_eq!(g.nodes.len(), 6);
    assert_eq!(g.edges.len(), 3 + 3 + 9);
    assert_eq!(g.meta.threshold, 0.0);
    assert!((g.meta.prior - 1.0 / 9.0).abs() < 1e-9);

    let pruned = parse_graph(&fs::read(&f.graph).unwrap()).unwrap();
    assert!(pruned.edges.iter().all(|e| e.weight >= 1.0));
    assert_eq!(pruned.meta.prior, 0.0002);
}

#[test]
fn evaluate_runs_the_cross_validation_protocol() {
    let f = Fixture::new();
    let out = f.dir.path().join("eval");
    run_ok(&[
        "evaluate",
        s(&f.records),
        "--out",
        s(&out),
        "--folds",
        "5",
        "--min-links",
        "3",
        "--kw",
        "3",
        "--ky",
        "3",
        "--min-count",
        "1",
        "--outer-iters",
        "5",
    ]);
    let heldout = fs::read_to_string(out.join("heldout.csv")).unwrap();
    let lines: Vec<&str> = heldout.lines().collect();
    assert_eq!(lines[0], "fold,text_ll,link_ll,total");
    assert_eq!(lines.len(), 6);
    for name in [
        "coherence_word.csv",
        "coherence_doc.csv",
        "summary.json",
        "manifest.json",
    ] {
        assert!(out.join(name).is_file(), "{name}");
    }
    let summary: serde_json::Value = serde_json::from_slice(&fs::read(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["min_links"], 3);
    // the 15 documents generated with fewer than three links are gone
    assert!(summary["n_documents"].as_u64().unwrap() <= 45);
}
