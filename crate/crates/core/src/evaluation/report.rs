use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{CoherenceReport, HeldoutReport};
use crate::error::Result;

/// `topic_id,score` rows; ids use the graph node prefix (`w` or `d`).
pub fn write_coherence_csv<W: Write>(report: &CoherenceReport, prefix: &str, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["topic_id", "score"])?;
    for (k, s) in report.per_topic.iter().enumerate() {
        w.write_record([format!("{prefix}{k}"), s.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `fold,text_ll,link_ll,total` rows, one per fold.
pub fn write_heldout_csv<W: Write>(report: &HeldoutReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["fold", "text_ll", "link_ll", "total"])?;
    for f in &report.per_fold {
        w.write_record([
            f.fold.to_string(),
            f.text_loglik.to_string(),
            f.link_loglik.to_string(),
            f.total.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationSummary {
    pub n_documents: usize,
    pub min_links: usize,
    pub heldout: HeldoutReport,
    pub word_coherence: CoherenceReport,
    pub doc_coherence: Option<CoherenceReport>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::FoldScore;

    #[test]
    fn csv_layouts() {
        let r = CoherenceReport::from_scores(vec![-1.5, 0.25], 10).unwrap();
        let mut buf = Vec::new();
        write_coherence_csv(&r, "w", &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "topic_id,score\nw0,-1.5\nw1,0.25\n");

        let h = HeldoutReport {
            per_fold: vec![FoldScore {
                fold: 0,
                text_loglik: -10.0,
                link_loglik: -2.5,
                total: -12.5,
                n_train: 4,
                n_test: 1,
                skipped_links: 0,
            }],
            mean_total: -12.5,
            n_folds: 1,
            seed: 0,
        };
        let mut buf = Vec::new();
        write_heldout_csv(&h, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "fold,text_ll,link_ll,total\n0,-10,-2.5,-12.5\n"
        );
    }
}
