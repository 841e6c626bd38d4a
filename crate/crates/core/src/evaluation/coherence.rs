use log::warn;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::inference::ModelParams;
use crate::topicweb::{indicative_words, top_keywords};

/// Default number of top words scored per topic.
pub const DEFAULT_COHERENCE_WORDS: usize = 10;

/// For every word, the sorted list of documents whose text contains it.
#[derive(Debug, Clone)]
pub struct DocFrequencyIndex {
    postings: Vec<Vec<u32>>,
}

impl DocFrequencyIndex {
    pub fn new(corpus: &Corpus) -> Self {
        let mut postings = vec![Vec::new(); corpus.vocabulary().len()];
        for (d, doc) in corpus.documents().iter().enumerate() {
            for &w in &doc.words {
                let list: &mut Vec<u32> = &mut postings[w];
                if list.last() != Some(&(d as u32)) {
                    list.push(d as u32);
                }
            }
        }
        Self { postings }
    }

    pub fn vocab_size(&self) -> usize {
        self.postings.len()
    }

    /// `D(w)`: documents containing `w`.
    pub fn doc_frequency(&self, w: usize) -> usize {
        self.postings.get(w).map_or(0, Vec::len)
    }

    /// `D(v, w)`: documents containing both words.
    pub fn co_doc_frequency(&self, v: usize, w: usize) -> usize {
        let (Some(a), Some(b)) = (self.postings.get(v), self.postings.get(w)) else {
            return 0;
        };
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }
}

/// Document co-occurrence coherence of a ranked word list:
/// `Σ_{m≥2} Σ_{l<m} log((D(v_m, v_l) + 1) / D(v_l))`.
///
/// Words that occur in no document are skipped with a warning.
pub fn topic_coherence(index: &DocFrequencyIndex, words: &[usize]) -> Result<f64> {
    let usable: Vec<usize> = words
        .iter()
        .copied()
        .filter(|&w| {
            let keep = index.doc_frequency(w) > 0;
            if !keep {
                warn!("word {w} occurs in no document; skipped in coherence");
            }
            keep
        })
        .collect();
    if usable.len() < 2 {
        return Err(Error::invalid(format!(
            "coherence needs at least 2 words that occur in the corpus, got {}",
            usable.len()
        )));
    }
    let mut score = 0.0;
    for m in 1..usable.len() {
        for l in 0..m {
            let joint = index.co_doc_frequency(usable[m], usable[l]) as f64;
            score += ((joint + 1.0) / index.doc_frequency(usable[l]) as f64).ln();
        }
    }
    Ok(score)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceReport {
    /// Score per topic, indexed by topic id.
    pub per_topic: Vec<f64>,
    pub mean: f64,
    pub top_words_used: usize,
}

impl CoherenceReport {
    pub fn from_scores(per_topic: Vec<f64>, top_words_used: usize) -> Result<Self> {
        if per_topic.is_empty() {
            return Err(Error::invalid("coherence report needs at least one topic"));
        }
        let mean = per_topic.iter().sum::<f64>() / per_topic.len() as f64;
        Ok(Self {
            per_topic,
            mean,
            top_words_used,
        })
    }
}

/// Coherence of every WordTopic's `m` top words.
pub fn word_topic_coherence(params: &ModelParams, index: &DocFrequencyIndex, m: usize) -> Result<CoherenceReport> {
    let scores = (0..params.k_word())
        .map(|k| {
            let words: Vec<usize> = top_keywords(params, k, m)?.into_iter().map(|(w, _)| w).collect();
            topic_coherence(index, &words)
        })
        .collect::<Result<Vec<_>>>()?;
    CoherenceReport::from_scores(scores, m)
}

/// Coherence of DocTopic `k_prime`, scoring its `m` indicative words.
pub fn doc_topic_coherence(
    params: &ModelParams,
    corpus: &Corpus,
    index: &DocFrequencyIndex,
    k_prime: usize,
    m: usize,
) -> Result<f64> {
    let words: Vec<usize> = indicative_words(params, corpus, k_prime, m)?
        .into_iter()
        .map(|(w, _)| w)
        .collect();
    topic_coherence(index, &words)
}

pub fn doc_topic_coherence_report(
    params: &ModelParams,
    corpus: &Corpus,
    index: &DocFrequencyIndex,
    m: usize,
) -> Result<CoherenceReport> {
    let scores = (0..params.k_doc())
        .map(|k| doc_topic_coherence(params, corpus, index, k, m))
        .collect::<Result<Vec<_>>>()?;
    CoherenceReport::from_scores(scores, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Document, Vocabulary};

    fn corpus(docs: &[&[usize]], v: usize) -> Corpus {
        let vocab = Vocabulary::from_terms((0..v).map(|i| format!("t{i}"))).unwrap();
        let docs = docs
            .iter()
            .enumerate()
            .map(|(i, w)| Document::new(format!("d{i}"), w.to_vec(), vec![]))
            .collect();
        Corpus::new(docs, vocab).unwrap()
    }

    #[test]
    fn always_cooccurring_pair() {
        // both words in each of the 4 documents: log(5/4)
        let c = corpus(&[&[0, 1], &[1, 0, 0], &[0, 1], &[1, 0]], 2);
        let idx = DocFrequencyIndex::new(&c);
        let s = topic_coherence(&idx, &[0, 1]).unwrap();
        assert!((s - 0.223_143_551_314_209_7).abs() < 1e-12, "{s}");
    }

    #[test]
    fn never_cooccurring_pair() {
        // top word in 5 documents, the second in 2 others: log(1/5)
        let c = corpus(&[&[0], &[0], &[0], &[0], &[0], &[1], &[1]], 2);
        let idx = DocFrequencyIndex::new(&c);
        let s = topic_coherence(&idx, &[0, 1]).unwrap();
        assert!((s + 1.609_437_912_434_100_3).abs() < 1e-12, "{s}");
    }

    #[test]
    fn unseen_words_are_skipped() {
        let c = corpus(&[&[0, 1], &[1]], 3);
        let idx = DocFrequencyIndex::new(&c);
        assert_eq!(
            topic_coherence(&idx, &[0, 2, 1]).unwrap(),
            topic_coherence(&idx, &[0, 1]).unwrap()
        );
        assert!(topic_coherence(&idx, &[0, 2]).is_err());
        assert!(topic_coherence(&idx, &[0]).is_err());
    }

    #[test]
    fn posting_lists_count_documents_not_tokens() {
        let c = corpus(&[&[0, 0, 0, 1], &[1, 1], &[0]], 2);
        let idx = DocFrequencyIndex::new(&c);
        assert_eq!(idx.doc_frequency(0), 2);
        assert_eq!(idx.doc_frequency(1), 2);
        assert_eq!(idx.co_doc_frequency(0, 1), 1);
        assert_eq!(idx.co_doc_frequency(1, 0), 1);
    }
}
