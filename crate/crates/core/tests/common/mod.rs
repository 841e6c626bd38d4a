#![allow(dead_code)]

use ndarray::{array, Array2};
use topicatlas::corpus::{Corpus, Document, Vocabulary};
use topicatlas::inference::{generate_corpus, sample_params, ModelParams};

pub fn vocab(n: usize) -> Vocabulary {
    Vocabulary::from_terms((0..n).map(|i| format!("t{i:02}"))).unwrap()
}

pub fn corpus(docs: Vec<(Vec<usize>, Vec<usize>)>, v: usize) -> Corpus {
    let docs = docs
        .into_iter()
        .enumerate()
        .map(|(i, (w, l))| Document::new(format!("doc{i}"), w, l))
        .collect();
    Corpus::new(docs, vocab(v)).unwrap()
}

/// Ground truth with sparse topics and a diagonally dominant transition
/// matrix, so every DocTopic is used and identifiable.
pub fn separable_truth(kw: usize, v: usize, d: usize, alpha: f64, seed: u64) -> ModelParams {
    let mut p = sample_params(kw, kw, v, d, alpha, 0.1, seed).unwrap();
    let off = 0.2 / (kw - 1) as f64;
    p.eta = Array2::from_shape_fn((kw, kw), |(a, b)| if a == b { 0.8 } else { off });
    p
}

pub fn synthetic(truth: &ModelParams, words: usize, links: usize, seed: u64) -> Corpus {
    let d = truth.n_targets();
    generate_corpus(truth, &vec![words; d], &vec![links; d], seed).unwrap()
}

/// A small corpus with links everywhere, for quick end-to-end fits.
pub fn small_network(seed: u64) -> Corpus {
    let truth = separable_truth(3, 30, 60, 0.1, 1000 + seed);
    synthetic(&truth, 60, 8, seed)
}

pub fn cosine(a: ndarray::ArrayView1<f64>, b: ndarray::ArrayView1<f64>) -> f64 {
    a.dot(&b) / (a.dot(&a).sqrt() * b.dot(&b).sqrt())
}

/// Heap's algorithm over row indices.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            go(k - 1, a, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            a.swap(j, k - 1);
        }
    }
    let mut out = Vec::new();
    go(n, &mut (0..n).collect(), &mut out);
    out
}

/// Worst per-row cosine under the best row matching.
pub fn matched_cosine(truth: &Array2<f64>, fit: &Array2<f64>) -> f64 {
    permutations(truth.nrows())
        .iter()
        .map(|p| {
            (0..truth.nrows())
                .map(|k| cosine(truth.row(k), fit.row(p[k])))
                .fold(1.0, f64::min)
        })
        .fold(f64::MIN, f64::max)
}

pub fn toy_params() -> ModelParams {
    ModelParams {
        alpha: vec![0.5, 0.5],
        beta: array![[0.6, 0.3, 0.1], [0.1, 0.2, 0.7]],
        eta: array![[0.7, 0.3], [0.2, 0.8]],
        omega: array![[0.5, 0.3, 0.2], [0.1, 0.1, 0.8]],
    }
}

/// Three WordTopics over disjoint blocks of ten words each; used to check
/// that coherence prefers the true topic count.
pub fn block_network(seed: u64) -> Corpus {
    let mut truth = sample_params(3, 3, 30, 60, 0.02, 0.1, 500 + seed).unwrap();
    truth.beta = Array2::from_shape_fn((3, 30), |(k, w)| if w / 10 == k { 0.1 } else { 0.0 });
    synthetic(&truth, 100, 10, seed)
}

/// K = 1 on two documents, where the variational bound is the exact log
/// likelihood.
pub fn single_topic() -> (Corpus, ModelParams) {
    let params = ModelParams {
        alpha: vec![0.01],
        beta: array![[0.7, 0.3]],
        eta: array![[1.0]],
        omega: array![[0.25, 0.75]],
    };
    let corpus = corpus(vec![(vec![0, 0, 1], vec![1]), (vec![1], vec![0, 1])], 2);
    (corpus, params)
}

pub fn single_topic_loglik() -> (f64, f64) {
    let (b0, b1, o0, o1) = (0.7f64.ln(), 0.3f64.ln(), 0.25f64.ln(), 0.75f64.ln());
    (2.0 * b0 + b1 + b1, o1 + o0 + o1)
}
