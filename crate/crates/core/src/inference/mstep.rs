use ndarray::Array2;

use super::{DocVariational, ModelParams};
use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::special::digamma;

/// Expected counts gathered over one E-step sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SuffStats {
    /// `K_w × V`: Σ over word tokens of `phi`, by word.
    pub beta_counts: Array2<f64>,
    /// `K_w × K_y`: Σ over link tokens of `lambda ⊗ sigma`.
    pub eta_counts: Array2<f64>,
    /// `K_y × D`: Σ over link tokens of `sigma`, by target.
    pub omega_counts: Array2<f64>,
    /// Σ_i (ψ(γ_ik) − ψ(Σ_k γ_ik)), the data term of the alpha objective.
    pub gamma_log_sums: Vec<f64>,
    pub n_docs: usize,
    pub elbo_sum: f64,
}

impl SuffStats {
    pub fn zeros(k_word: usize, k_doc: usize, vocab_size: usize, n_targets: usize) -> Self {
        Self {
            beta_counts: Array2::zeros((k_word, vocab_size)),
            eta_counts: Array2::zeros((k_word, k_doc)),
            omega_counts: Array2::zeros((k_doc, n_targets)),
            gamma_log_sums: vec![0.0; k_word],
            n_docs: 0,
            elbo_sum: 0.0,
        }
    }

    pub fn for_params(params: &ModelParams) -> Self {
        Self::zeros(params.k_word(), params.k_doc(), params.vocab_size(), params.n_targets())
    }

    /// Adds one document. `links` must be the link tokens the E-step saw.
    pub fn accumulate(&mut self, words: &[usize], links: &[usize], var: &DocVariational, elbo: f64) {
        for (row, &w) in var.phi.rows().into_iter().zip(words) {
            for (k, &p) in row.iter().enumerate() {
                self.beta_counts[[k, w]] += p;
            }
        }
        for (i, &target) in links.iter().enumerate() {
            let lambda = var.lambda.row(i);
            let sigma = var.sigma.row(i);
            for (k, &l) in lambda.iter().enumerate() {
                for (kp, &s) in sigma.iter().enumerate() {
                    self.eta_counts[[k, kp]] += l * s;
                }
            }
            for (kp, &s) in sigma.iter().enumerate() {
                self.omega_counts[[kp, target]] += s;
            }
        }
        let dg_sum = digamma(var.gamma.iter().sum());
        for (acc, &g) in self.gamma_log_sums.iter_mut().zip(&var.gamma) {
            *acc += digamma(g) - dg_sum;
        }
        self.n_docs += 1;
        self.elbo_sum += elbo;
    }

    pub fn accumulate_document(&mut self, doc: &Document, var: &DocVariational, elbo: f64, use_links: bool) {
        let links: &[usize] = if use_links { &doc.links } else { &[] };
        self.accumulate(&doc.words, links, var, elbo);
    }
}

/// Re-estimates `beta`, `eta` and `omega` from expected counts.
///
/// Each count cell gets `smoothing_eps` added before its row is normalized.
/// `alpha` is carried through unchanged; see [`update_alpha`](super::update_alpha).
pub fn m_step(stats: &SuffStats, smoothing_eps: f64, alpha: &[f64]) -> Result<ModelParams> {
    Ok(ModelParams {
        alpha: alpha.to_vec(),
        beta: normalize_counts(&stats.beta_counts, smoothing_eps, "beta")?,
        eta: normalize_counts(&stats.eta_counts, smoothing_eps, "eta")?,
        omega: normalize_counts(&stats.omega_counts, smoothing_eps, "omega")?,
    })
}

fn normalize_counts(counts: &Array2<f64>, eps: f64, name: &str) -> Result<Array2<f64>> {
    let mut out = counts.mapv(|c| c + eps);
    for (r, mut row) in out.rows_mut().into_iter().enumerate() {
        let s = row.sum();
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::invalid(format!(
                "{name} row {r} has no mass; use a positive smoothing_eps"
            )));
        }
        row /= s;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn var(phi: Array2<f64>, lambda: Array2<f64>, sigma: Array2<f64>) -> DocVariational {
        DocVariational {
            gamma: vec![1.0; phi.ncols()],
            phi,
            lambda,
            sigma,
        }
    }

    #[test]
    fn single_link_eta_hand_example() {
        let mut s = SuffStats::zeros(2, 2, 1, 1);
        let v = var(Array2::zeros((0, 2)), array![[0.5, 0.5]], array![[1.0, 0.0]]);
        s.accumulate(&[], &[0], &v, 0.0);
        // column 1 gets (0.5, 0.5), column 2 gets nothing
        assert_eq!(s.eta_counts, array![[0.5, 0.0], [0.5, 0.0]]);
        let p = m_step(&s, 0.0, &[0.1, 0.1]);
        // beta and omega have all-zero rows with eps = 0
        assert!(p.is_err());
        s.beta_counts.fill(1.0);
        s.omega_counts.fill(1.0);
        let p = m_step(&s, 0.0, &[0.1, 0.1]).unwrap();
        assert_eq!(p.eta, array![[1.0, 0.0], [1.0, 0.0]]);
    }

    #[test]
    fn uniform_phi_gives_frequency_proportional_beta() {
        let k = 3;
        let words = [0usize, 1, 1, 2, 2, 2, 3];
        let phi = Array2::from_elem((words.len(), k), 1.0 / k as f64);
        let mut s = SuffStats::zeros(k, 1, 4, 1);
        s.accumulate(
            &words,
            &[],
            &var(phi, Array2::zeros((0, k)), Array2::zeros((0, 1))),
            0.0,
        );
        let p = m_step(&s, 0.0, &[0.1; 3]);
        // eta/omega rows have no mass with eps = 0
        assert!(p.is_err());
        let p = m_step(&s, 1e-10, &[0.1; 3]).unwrap();
        let freq = [1.0 / 7.0, 2.0 / 7.0, 3.0 / 7.0, 1.0 / 7.0];
        for row in p.beta.rows() {
            for (b, f) in row.iter().zip(freq) {
                assert!((b - f).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn no_links_gives_uniform_eta_and_omega() {
        let s = SuffStats {
            beta_counts: array![[1.0, 2.0]],
            ..SuffStats::zeros(1, 3, 2, 4)
        };
        let p = m_step(&s, 1e-10, &[0.5]).unwrap();
        assert!(p.eta.iter().all(|&x| (x - 1.0 / 3.0).abs() < 1e-15));
        assert!(p.omega.iter().all(|&x| (x - 0.25).abs() < 1e-15));
    }

    #[test]
    fn rows_sum_to_one() {
        let s = SuffStats {
            beta_counts: array![[3.0, 0.0, 1e-3], [0.2, 7.0, 0.0]],
            eta_counts: array![[0.3, 0.1], [0.0, 2.0]],
            omega_counts: array![[5.0, 1.0, 0.0], [0.0, 0.0, 1e-6]],
            ..SuffStats::zeros(2, 2, 3, 3)
        };
        let p = m_step(&s, 1e-10, &[0.1, 0.1]).unwrap();
        p.validate().unwrap();
    }
}
