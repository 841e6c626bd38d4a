use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Everything that controls a fit. Defaults follow the reference setup:
/// 70 WordTopics and 70 DocTopics, `alpha = 0.01`, inner loop until the
/// fractional ELBO gain drops below 1e-9 (at most 100 sweeps), outer loop
/// until it drops below 1e-4 (at most 50 iterations).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub k_word: usize,
    pub k_doc: usize,
    pub alpha_init: f64,
    pub inner_tol: f64,
    pub inner_max_iters: usize,
    pub outer_tol: f64,
    pub outer_max_iters: usize,
    pub smoothing_eps: f64,
    pub seed: u64,
    pub update_alpha: bool,
    /// When false, link tokens are ignored and the model reduces to LDA.
    pub use_links: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            k_word: 70,
            k_doc: 70,
            alpha_init: 0.01,
            inner_tol: 1e-9,
            inner_max_iters: 100,
            outer_tol: 1e-4,
            outer_max_iters: 50,
            smoothing_eps: 1e-10,
            seed: 0,
            update_alpha: true,
            use_links: true,
        }
    }
}

impl TrainConfig {
    pub fn with_topics(k_word: usize, k_doc: usize) -> Self {
        Self {
            k_word,
            k_doc,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_word == 0 || self.k_doc == 0 {
            return Err(Error::invalid("topic counts must be at least 1"));
        }
        if !(self.alpha_init > 0.0 && self.alpha_init.is_finite()) {
            return Err(Error::invalid("alpha_init must be positive"));
        }
        if !(self.inner_tol > 0.0) || !(self.outer_tol > 0.0) {
            return Err(Error::invalid("tolerances must be positive"));
        }
        if self.inner_max_iters == 0 || self.outer_max_iters == 0 {
            return Err(Error::invalid("iteration caps must be at least 1"));
        }
        if !(self.smoothing_eps >= 0.0) {
            return Err(Error::invalid("smoothing_eps must be non-negative"));
        }
        Ok(())
    }
}
