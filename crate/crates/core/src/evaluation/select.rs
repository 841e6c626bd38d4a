use log::{info, warn};
use serde::{Deserialize, Serialize};

use super::{word_topic_coherence, DocFrequencyIndex};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::inference::{train, TrainConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicSelection {
    pub best: usize,
    /// Mean WordTopic coherence per candidate; `None` when fitting failed.
    pub scores: Vec<(usize, Option<f64>)>,
}

/// Picks the WordTopic count whose text-only fit has the highest mean
/// coherence over its `top_words` top words. Ties go to the smaller count;
/// candidates whose fit fails are skipped with a warning.
pub fn select_topic_number(
    corpus: &Corpus,
    candidates: &[usize],
    config: &TrainConfig,
    top_words: usize,
) -> Result<TopicSelection> {
    if candidates.is_empty() {
        return Err(Error::invalid("no candidate topic numbers"));
    }
    let text_only = corpus.without_links();
    let index = DocFrequencyIndex::new(&text_only);
    let mut scores = Vec::with_capacity(candidates.len());
    let mut best: Option<(usize, f64)> = None;
    for &k in candidates {
        let cfg = TrainConfig {
            k_word: k,
            ..config.clone()
        };
        let score = train(&text_only, &cfg).and_then(|m| word_topic_coherence(&m.params, &index, top_words));
        match score {
            Ok(r) => {
                info!("K = {k}: mean coherence {:.4}", r.mean);
                let better = match best {
                    None => true,
                    Some((bk, bs)) => r.mean > bs || (r.mean == bs && k < bk),
                };
                if better {
                    best = Some((k, r.mean));
                }
                scores.push((k, Some(r.mean)));
            }
            Err(e) => {
                warn!("K = {k} skipped: {e}");
                scores.push((k, None));
            }
        }
    }
    let (best, _) = best.ok_or_else(|| Error::invalid("every candidate topic number failed"))?;
    Ok(TopicSelection { best, scores })
}
