use ndarray::Array2;

use crate::error::{Error, Result};
use crate::inference::{DocSummary, TrainedModel};

/// Corpus-level posterior summaries derived from a fitted model.
///
/// Counts are soft: the expected number of tokens per topic under the
/// variational posterior (sums of `phi` and `sigma` rows).
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorStats {
    /// `D × K_w`: posterior mean WordTopic proportions per document.
    pub theta_hat: Array2<f64>,
    /// `p(z = k | D)`: share of word tokens assigned to each WordTopic.
    pub p_word_topic: Vec<f64>,
    /// `p(z' = k' | D)`: share of link tokens assigned to each DocTopic.
    pub p_doc_topic: Vec<f64>,
    /// `D × K_w`: expected word counts per document and WordTopic.
    pub word_soft_counts: Array2<f64>,
    /// Expected link counts per DocTopic, summed over the corpus.
    pub doc_soft_counts: Vec<f64>,
}

pub fn posterior_stats(model: &TrainedModel) -> Result<PosteriorStats> {
    PosteriorStats::from_summaries(&model.params.alpha, &model.summaries)
}

impl PosteriorStats {
    pub fn from_summaries(alpha: &[f64], summaries: &[DocSummary]) -> Result<Self> {
        let kw = alpha.len();
        let d = summaries.len();
        if d == 0 {
            return Err(Error::invalid("model has no document summaries"));
        }
        let ky = summaries[0].doc_topic_mass.len();
        let mut counts = Array2::zeros((d, kw));
        let mut theta = Array2::zeros((d, kw));
        let mut doc_soft = vec![0.0; ky];
        for (i, s) in summaries.iter().enumerate() {
            if s.word_topic_mass.len() != kw || s.doc_topic_mass.len() != ky {
                return Err(Error::invalid(format!("summary {i} has inconsistent dimensions")));
            }
            for (k, t) in theta_hat_row(alpha, s).into_iter().enumerate() {
                counts[[i, k]] = s.word_topic_mass[k];
                theta[[i, k]] = t;
            }
            for (acc, &m) in doc_soft.iter_mut().zip(&s.doc_topic_mass) {
                *acc += m;
            }
        }
        let word_soft: Vec<f64> = counts.sum_axis(ndarray::Axis(0)).to_vec();
        let total_words: f64 = word_soft.iter().sum();
        if !(total_words > 0.0) {
            return Err(Error::invalid("corpus has no word tokens"));
        }
        let total_links: f64 = doc_soft.iter().sum();
        if !(total_links > 0.0) {
            return Err(Error::NoLinkTokens);
        }
        Ok(Self {
            theta_hat: theta,
            p_word_topic: word_soft.iter().map(|c| c / total_words).collect(),
            p_doc_topic: doc_soft.iter().map(|c| c / total_links).collect(),
            word_soft_counts: counts,
            doc_soft_counts: doc_soft,
        })
    }
}

/// Posterior mean WordTopic proportions of one document:
/// `(c_k + α_k) / Σ_k* (c_k* + α_k*)` with `c` its expected word counts.
pub fn theta_hat_row(alpha: &[f64], summary: &DocSummary) -> Vec<f64> {
    let denom: f64 = summary.word_topic_mass.iter().zip(alpha).map(|(c, a)| c + a).sum();
    summary
        .word_topic_mass
        .iter()
        .zip(alpha)
        .map(|(c, a)| (c + a) / denom)
        .collect()
}
