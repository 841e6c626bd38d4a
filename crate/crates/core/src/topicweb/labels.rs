//! Human-readable summaries of topics.

use ndarray::ArrayView1;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::inference::ModelParams;

/// Indices of the `m` largest entries, descending, ties broken by lower index.
pub fn top_indices(values: ArrayView1<'_, f64>, m: usize) -> Vec<(usize, f64)> {
    let mut ranked: Vec<(usize, f64)> = values.iter().copied().enumerate().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked.truncate(m);
    ranked
}

/// The `m` most probable words of WordTopic `k`.
pub fn top_keywords(params: &ModelParams, k: usize, m: usize) -> Result<Vec<(usize, f64)>> {
    if k >= params.k_word() {
        return Err(Error::invalid(format!("WordTopic {k} out of range")));
    }
    Ok(top_indices(params.beta.row(k), m))
}

/// The `n` documents DocTopic `k_prime` is most likely to link to.
pub fn top_documents(params: &ModelParams, k_prime: usize, n: usize) -> Result<Vec<(usize, f64)>> {
    if k_prime >= params.k_doc() {
        return Err(Error::invalid(format!("DocTopic {k_prime} out of range")));
    }
    Ok(top_indices(params.omega.row(k_prime), n))
}

/// Expected count of every word in the text of a document drawn from
/// DocTopic `k_prime`: `E(w | z' = k') = Σ_d Ω_k'd · #(w, d)`.
pub fn word_expectancy(params: &ModelParams, corpus: &Corpus, k_prime: usize) -> Result<Vec<f64>> {
    if k_prime >= params.k_doc() {
        return Err(Error::invalid(format!("DocTopic {k_prime} out of range")));
    }
    if params.n_targets() != corpus.len() || params.vocab_size() != corpus.vocabulary().len() {
        return Err(Error::invalid("model and corpus dimensions differ"));
    }
    let omega = params.omega.row(k_prime);
    let mut expectancy = vec![0.0; corpus.vocabulary().len()];
    for (d, doc) in corpus.documents().iter().enumerate() {
        let weight = omega[d];
        for &w in &doc.words {
            expectancy[w] += weight;
        }
    }
    Ok(expectancy)
}

/// The `m` words with the highest expectancy under DocTopic `k_prime`.
pub fn indicative_words(params: &ModelParams, corpus: &Corpus, k_prime: usize, m: usize) -> Result<Vec<(usize, f64)>> {
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    let e = word_expectancy(params, corpus, k_prime)?;
    Ok(top_indices(ArrayView1::from(&e), m))
}
