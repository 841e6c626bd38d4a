use ndarray::Array2;
use rand::distr::{Distribution, Open01};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::TrainConfig;
use crate::error::{Error, Result};

/// Global parameters of the joint text/link model.
///
/// * `alpha`: Dirichlet prior over WordTopics, length `K_w`.
/// * `beta`: `K_w × V`, WordTopic → word.
/// * `eta`: `K_w × K_y`, WordTopic → DocTopic transition.
/// * `omega`: `K_y × D`, DocTopic → linked document.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub alpha: Vec<f64>,
    pub beta: Array2<f64>,
    pub eta: Array2<f64>,
    pub omega: Array2<f64>,
}

impl ModelParams {
    pub fn k_word(&self) -> usize {
        self.alpha.len()
    }

    pub fn k_doc(&self) -> usize {
        self.eta.ncols()
    }

    pub fn vocab_size(&self) -> usize {
        self.beta.ncols()
    }

    pub fn n_targets(&self) -> usize {
        self.omega.ncols()
    }

    /// Checks shapes, positivity and row-stochasticity (within `1e-9`).
    pub fn validate(&self) -> Result<()> {
        let kw = self.k_word();
        if kw == 0 || self.k_doc() == 0 || self.vocab_size() == 0 || self.n_targets() == 0 {
            return Err(Error::invalid("model dimensions must be non-zero"));
        }
        if self.beta.nrows() != kw || self.eta.nrows() != kw || self.omega.nrows() != self.k_doc() {
            return Err(Error::invalid("inconsistent parameter shapes"));
        }
        if self.alpha.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return Err(Error::invalid("alpha entries must be positive and finite"));
        }
        for (name, m) in [("beta", &self.beta), ("eta", &self.eta), ("omega", &self.omega)] {
            for (r, row) in m.rows().into_iter().enumerate() {
                if row.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
                    return Err(Error::invalid(format!("{name} row {r} has invalid entries")));
                }
                let s: f64 = row.sum();
                if (s - 1.0).abs() > 1e-9 {
                    return Err(Error::invalid(format!("{name} row {r} sums to {s}")));
                }
            }
        }
        Ok(())
    }
}

/// Random row-stochastic start: every row of `beta`, `eta`, `omega` is drawn
/// as open-interval uniforms and normalized, in that order, from one seeded
/// stream. `alpha` starts at `alpha_init` in every component.
pub fn init_model(vocab_size: usize, n_targets: usize, config: &TrainConfig) -> Result<ModelParams> {
    config.validate()?;
    if vocab_size == 0 || n_targets == 0 {
        return Err(Error::invalid("vocabulary and document counts must be non-zero"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let beta = random_stochastic(config.k_word, vocab_size, &mut rng);
    let eta = random_stochastic(config.k_word, config.k_doc, &mut rng);
    let omega = random_stochastic(config.k_doc, n_targets, &mut rng);
    Ok(ModelParams {
        alpha: vec![config.alpha_init; config.k_word],
        beta,
        eta,
        omega,
    })
}

fn random_stochastic(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let mut m = Array2::from_shape_fn((rows, cols), |_| Open01.sample(rng));
    for mut row in m.rows_mut() {
        let s = row.sum();
        row /= s;
    }
    m
}
