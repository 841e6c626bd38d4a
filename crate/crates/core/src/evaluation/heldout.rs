use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::inference::{EStepContext, ModelParams, TrainConfig};

/// Held-out ELBO of a set of test documents under frozen global parameters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct HeldoutScore {
    pub text_loglik: f64,
    pub link_loglik: f64,
    pub n_docs: usize,
    /// Links whose target lies outside the support of `omega`.
    pub skipped_links: usize,
}

impl HeldoutScore {
    pub fn total(&self) -> f64 {
        self.text_loglik + self.link_loglik
    }
}

/// Runs the E-step on each test document with `params` fixed and reports
/// the document ELBO as a lower bound on its log likelihood.
///
/// The bound splits into word terms and link terms; the Dirichlet term is
/// shared between them in proportion to the document's word and link
/// counts. Link targets outside `omega`'s support are dropped and counted.
pub fn heldout_log_likelihood(
    params: &ModelParams,
    test_docs: &[&Document],
    config: &TrainConfig,
) -> Result<HeldoutScore> {
    if test_docs.is_empty() {
        return Err(Error::invalid("held-out evaluation needs at least one test document"));
    }
    let ctx = EStepContext::new(params, config.use_links);
    let mut score = HeldoutScore {
        n_docs: test_docs.len(),
        ..Default::default()
    };
    for doc in test_docs {
        let kept: Vec<usize> = doc.links.iter().copied().filter(|&y| y < params.n_targets()).collect();
        score.skipped_links += doc.links.len() - kept.len();
        let doc = Document::new(doc.id.clone(), doc.words.clone(), kept);
        let inf = ctx
            .infer(&doc, config.inner_tol, config.inner_max_iters)
            .map_err(|e| e.with_context(|| format!("held-out document {:?}", doc.id)))?;
        let n = doc.words.len() as f64;
        let l = ctx.links(&doc).len() as f64;
        let terms = inf.elbo;
        if n + l > 0.0 {
            score.text_loglik += terms.text + terms.theta * n / (n + l);
            score.link_loglik += terms.link + terms.theta * l / (n + l);
        }
    }
    Ok(score)
}
