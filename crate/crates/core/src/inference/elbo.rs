use serde::{Deserialize, Serialize};

use super::{DocVariational, EStepContext, ModelParams};
use crate::corpus::Corpus;
use crate::error::{Error, Result};

/// A document's ELBO contribution, split by source.
///
/// `theta` is `E[log p(θ|α)] - E[log q(θ|γ)]`; `text` collects the word
/// token terms (including the entropy of `phi`); `link` collects the link
/// token terms (including the entropies of `lambda` and `sigma`).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ElboTerms {
    pub theta: f64,
    pub text: f64,
    pub link: f64,
}

impl ElboTerms {
    pub fn total(&self) -> f64 {
        self.theta + self.text + self.link
    }
}

/// Total ELBO of `corpus` under `params` and the given per-document
/// variational parameters.
pub fn compute_elbo(corpus: &Corpus, params: &ModelParams, per_doc: &[DocVariational]) -> Result<f64> {
    if per_doc.len() != corpus.len() {
        return Err(Error::invalid(format!(
            "{} variational entries for {} documents",
            per_doc.len(),
            corpus.len()
        )));
    }
    let ctx = EStepContext::new(params, true);
    let mut total = 0.0;
    for (doc, var) in corpus.documents().iter().zip(per_doc) {
        if var.phi.nrows() != doc.words.len() || var.lambda.nrows() != doc.links.len() {
            return Err(Error::invalid(format!("variational shape mismatch for {:?}", doc.id)));
        }
        total += ctx.document_elbo(&doc.words, &doc.links, var).total();
    }
    if !total.is_finite() {
        return Err(Error::numerical("elbo"));
    }
    Ok(total)
}
