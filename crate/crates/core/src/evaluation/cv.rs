use std::collections::HashSet;

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::heldout_log_likelihood;
use crate::corpus::{split_folds, Corpus};
use crate::error::{Error, Result};
use crate::inference::{train_observed, TrainConfig, TrainingSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldScore {
    pub fold: usize,
    pub text_loglik: f64,
    pub link_loglik: f64,
    pub total: f64,
    pub n_train: usize,
    pub n_test: usize,
    pub skipped_links: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeldoutReport {
    pub per_fold: Vec<FoldScore>,
    pub mean_total: f64,
    pub n_folds: usize,
    pub seed: u64,
}

/// k-fold cross-validated held-out log likelihood.
///
/// Documents are split with `config.seed`; each fold trains on the other
/// folds and scores the held fold with frozen parameters. Folds run
/// concurrently but results are reported in fold order.
pub fn run_cv(corpus: &Corpus, config: &TrainConfig, n_folds: usize) -> Result<HeldoutReport> {
    let folds = split_folds(corpus.len(), n_folds, config.seed)?;
    let hash = corpus.content_hash();
    let per_fold = (0..n_folds)
        .into_par_iter()
        .map(|f| {
            let test = folds.test_indices(f);
            let train = folds.train_indices(f);
            let held: HashSet<usize> = test.iter().copied().collect();
            if train.iter().any(|i| held.contains(i)) {
                return Err(Error::Validation(format!(
                    "fold {f}: training set overlaps the test set"
                )));
            }
            let set = TrainingSet::subset(corpus, &train);
            let model = train_observed(&set, config, hash.clone(), &mut ())
                .map_err(|e| e.with_context(|| format!("fold {f}")))?;
            let docs: Vec<_> = test.iter().map(|&i| corpus.document(i)).collect();
            let s = heldout_log_likelihood(&model.params, &docs, config)?;
            info!("fold {f}: text {:.4} link {:.4}", s.text_loglik, s.link_loglik);
            Ok(FoldScore {
                fold: f,
                text_loglik: s.text_loglik,
                link_loglik: s.link_loglik,
                total: s.total(),
                n_train: train.len(),
                n_test: test.len(),
                skipped_links: s.skipped_links,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mean_total = per_fold.iter().map(|f| f.total).sum::<f64>() / n_folds as f64;
    Ok(HeldoutReport {
        per_fold,
        mean_total,
        n_folds,
        seed: config.seed,
    })
}
