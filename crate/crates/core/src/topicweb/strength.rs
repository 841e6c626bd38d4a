//! Co-occurrence probabilities for the three relation kinds.

use ndarray::Array2;

use super::PosteriorStats;
use crate::error::{Error, Result};
use crate::inference::ModelParams;

/// `p(z1 = k1, z2 = k2 | D) = Σ_k' Σ_i p(z' = k' | D) · Ω_k'i · θ̂_ik1 · θ̂_ik2`.
///
/// Two WordTopics co-occur when they are both drawn for the same document,
/// with documents weighted by how likely a random link lands on them.
pub fn word_word_strength(stats: &PosteriorStats, params: &ModelParams) -> Result<Array2<f64>> {
    let d = stats.theta_hat.nrows();
    if params.n_targets() != d {
        return Err(Error::invalid(format!(
            "omega covers {} documents but posterior stats cover {d}",
            params.n_targets()
        )));
    }
    if stats.p_doc_topic.len() != params.k_doc() {
        return Err(Error::invalid("DocTopic count mismatch"));
    }
    let kw = stats.theta_hat.ncols();
    // doc_weight_i = Σ_k' p(k') Ω_k'i
    let doc_weight = ndarray::Array1::from(stats.p_doc_topic.clone()).dot(&params.omega);
    let mut out = Array2::zeros((kw, kw));
    for (i, theta) in stats.theta_hat.rows().into_iter().enumerate() {
        let r = doc_weight[i];
        for k1 in 0..kw {
            let a = r * theta[k1];
            for k2 in k1..kw {
                out[[k1, k2]] += a * theta[k2];
            }
        }
    }
    mirror_upper(&mut out);
    Ok(out)
}

/// `p(z'1 = k'1, z'2 = k'2 | D) = Σ_k p(z = k | D) · η_kk'1 · η_kk'2`.
pub fn doc_doc_strength(stats: &PosteriorStats, params: &ModelParams) -> Result<Array2<f64>> {
    check_word_marginal(stats, params)?;
    let ky = params.k_doc();
    let mut out = Array2::zeros((ky, ky));
    for (k, eta) in params.eta.rows().into_iter().enumerate() {
        let p = stats.p_word_topic[k];
        for a in 0..ky {
            let x = p * eta[a];
            for b in a..ky {
                out[[a, b]] += x * eta[b];
            }
        }
    }
    mirror_upper(&mut out);
    Ok(out)
}

/// `p(z = k, z' = k' | D) = η_kk' · p(z = k | D)`.
pub fn word_doc_strength(stats: &PosteriorStats, params: &ModelParams) -> Result<Array2<f64>> {
    check_word_marginal(stats, params)?;
    let mut out = params.eta.clone();
    for (mut row, &p) in out.rows_mut().into_iter().zip(&stats.p_word_topic) {
        row *= p;
    }
    Ok(out)
}

fn check_word_marginal(stats: &PosteriorStats, params: &ModelParams) -> Result<()> {
    if stats.p_word_topic.len() != params.k_word() {
        return Err(Error::invalid("WordTopic count mismatch"));
    }
    Ok(())
}

fn mirror_upper(m: &mut Array2<f64>) {
    let n = m.nrows();
    for a in 0..n {
        for b in 0..a {
            m[[a, b]] = m[[b, a]];
        }
    }
}
