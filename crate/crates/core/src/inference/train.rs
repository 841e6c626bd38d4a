use log::{debug, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    init_model, m_step, update_alpha, DocInference, DocVariational, EStepContext, ModelParams, SuffStats, TrainConfig,
    WarmStart,
};
use crate::corpus::{Corpus, Document};
use crate::error::{Error, Result};

/// Documents processed in parallel between two sequential reduction steps.
/// The reduction always runs in document order, so results do not depend on
/// the number of worker threads.
const CHUNK: usize = 256;

/// The documents a model is fitted on.
///
/// Link targets index the full corpus, so a fold's training set keeps every
/// document of the corpus inside the support of `omega`.
#[derive(Debug, Clone)]
pub struct TrainingSet<'a> {
    documents: Vec<&'a Document>,
    vocab_size: usize,
    n_targets: usize,
}

impl<'a> TrainingSet<'a> {
    pub fn from_corpus(corpus: &'a Corpus) -> Self {
        Self {
            documents: corpus.documents().iter().collect(),
            vocab_size: corpus.vocabulary().len(),
            n_targets: corpus.len(),
        }
    }

    pub fn subset(corpus: &'a Corpus, indices: &[usize]) -> Self {
        Self {
            documents: indices.iter().map(|&i| corpus.document(i)).collect(),
            vocab_size: corpus.vocabulary().len(),
            n_targets: corpus.len(),
        }
    }

    pub fn documents(&self) -> &[&'a Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }
}

/// What survives of a document's variational fit after training: `gamma`
/// plus the expected topic counts that posterior statistics need.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocSummary {
    pub gamma: Vec<f64>,
    /// Σ_n phi_nk, the expected number of words assigned to WordTopic k.
    pub word_topic_mass: Vec<f64>,
    /// Σ_l sigma_lk', the expected number of links assigned to DocTopic k'.
    pub doc_topic_mass: Vec<f64>,
}

impl DocSummary {
    pub fn from_variational(var: &DocVariational) -> Self {
        Self {
            gamma: var.gamma.clone(),
            word_topic_mass: var.phi.sum_axis(ndarray::Axis(0)).to_vec(),
            doc_topic_mass: var.sigma.sum_axis(ndarray::Axis(0)).to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub params: ModelParams,
    /// One entry per training document, from the final E-step.
    pub summaries: Vec<DocSummary>,
    /// Corpus ELBO after each E-step.
    pub elbo_trace: Vec<f64>,
    pub corpus_hash: String,
    pub config: TrainConfig,
    pub converged: bool,
    /// Set when some Newton–Raphson alpha update hit its cap.
    pub alpha_warning: bool,
}

/// Hooks into the training loop, called sequentially in document order.
pub trait TrainObserver {
    fn on_document(&mut self, _iteration: usize, _doc: usize, _var: &DocVariational) {}
    fn on_m_step(&mut self, _iteration: usize, _params: &ModelParams) {}
}

impl TrainObserver for () {}

/// Variational EM over the whole corpus.
pub fn train(corpus: &Corpus, config: &TrainConfig) -> Result<TrainedModel> {
    train_observed(
        &TrainingSet::from_corpus(corpus),
        config,
        corpus.content_hash(),
        &mut (),
    )
}

/// Variational EM: alternate a full E-step sweep with the M-step and alpha
/// update until the relative ELBO gain drops below `outer_tol` or
/// `outer_max_iters` passes have run.
///
/// Every E-step fits each document from a fresh uniform start. From the
/// second pass on it also restarts from the document's previous `gamma`,
/// `lambda` and `sigma`, and keeps whichever fit has the higher bound; a
/// fresh start alone can settle in a worse local optimum and make the
/// corpus ELBO dip.
pub fn train_observed(
    set: &TrainingSet<'_>,
    config: &TrainConfig,
    corpus_hash: String,
    observer: &mut dyn TrainObserver,
) -> Result<TrainedModel> {
    config.validate()?;
    if set.is_empty() {
        return Err(Error::invalid("cannot train on an empty corpus"));
    }
    let mut params = init_model(set.vocab_size, set.n_targets, config)?;
    let mut elbo_trace = Vec::new();
    let mut summaries = Vec::new();
    let mut converged = false;
    let mut alpha_warning = false;
    let mut incumbents: Vec<Option<WarmStart>> = vec![None; set.len()];

    for iteration in 0..config.outer_max_iters {
        let (stats, sweep) = e_step_sweep(set, &params, config, iteration, &mut incumbents, observer)?;
        summaries = sweep;
        let elbo = stats.elbo_sum;
        debug!("iteration {iteration}: elbo {elbo}");
        let gain = elbo_trace
            .last()
            .map(|&prev: &f64| (elbo - prev) / prev.abs().max(f64::MIN_POSITIVE));
        elbo_trace.push(elbo);

        let mut next = m_step(&stats, config.smoothing_eps, &params.alpha)?;
        if config.update_alpha {
            let upd = update_alpha(&stats.gamma_log_sums, &params.alpha, stats.n_docs);
            if !upd.converged {
                warn!("alpha update did not converge in iteration {iteration}");
                alpha_warning = true;
            }
            next.alpha = upd.alpha;
        }
        params = next;
        observer.on_m_step(iteration, &params);

        if matches!(gain, Some(g) if g < config.outer_tol) {
            converged = true;
            break;
        }
    }

    Ok(TrainedModel {
        params,
        summaries,
        elbo_trace,
        corpus_hash,
        config: config.clone(),
        converged,
        alpha_warning,
    })
}

fn e_step_sweep(
    set: &TrainingSet<'_>,
    params: &ModelParams,
    config: &TrainConfig,
    iteration: usize,
    incumbents: &mut [Option<WarmStart>],
    observer: &mut dyn TrainObserver,
) -> Result<(SuffStats, Vec<DocSummary>)> {
    let ctx = EStepContext::new(params, config.use_links);
    let mut stats = SuffStats::for_params(params);
    let mut summaries = Vec::with_capacity(set.len());
    for (c, (chunk, starts)) in set
        .documents
        .chunks(CHUNK)
        .zip(incumbents.chunks_mut(CHUNK))
        .enumerate()
    {
        let results: Vec<_> = chunk
            .par_iter()
            .zip(starts.par_iter())
            .map(|(doc, start)| fit_document(&ctx, doc, start.as_ref(), config))
            .collect();
        for (j, (doc, res)) in chunk.iter().zip(results).enumerate() {
            let out =
                res.map_err(|e| e.with_context(|| format!("outer iteration {iteration}, document {:?}", doc.id)))?;
            let index = c * CHUNK + j;
            starts[j] = Some(WarmStart::from_variational(&out.variational));
            observer.on_document(iteration, index, &out.variational);
            stats.accumulate(&doc.words, ctx.links(doc), &out.variational, out.elbo.total());
            summaries.push(DocSummary::from_variational(&out.variational));
        }
    }
    if !stats.elbo_sum.is_finite() {
        return Err(Error::numerical("elbo").with_context(|| format!("outer iteration {iteration}")));
    }
    Ok((stats, summaries))
}

/// Fresh fit, or the better of a fresh and a warm fit. Ties keep the fresh one.
fn fit_document(
    ctx: &EStepContext<'_>,
    doc: &Document,
    start: Option<&WarmStart>,
    config: &TrainConfig,
) -> Result<DocInference> {
    let fresh = ctx.infer(doc, config.inner_tol, config.inner_max_iters)?;
    let Some(start) = start else {
        return Ok(fresh);
    };
    let warm = ctx.infer_from(doc, Some(start), config.inner_tol, config.inner_max_iters)?;
    Ok(if warm.elbo.total() > fresh.elbo.total() {
        warm
    } else {
        fresh
    })
}
