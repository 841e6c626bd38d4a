use ndarray::Array2;

use super::elbo::ElboTerms;
use super::{ModelParams, TrainConfig};
use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::special::{digamma, ln_gamma};

/// Per-document variational parameters.
///
/// `phi` is `N × K_w` (one row per word token), `lambda` is `L × K_w` and
/// `sigma` is `L × K_y` (one row per link token). Every row is a
/// probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DocVariational {
    pub gamma: Vec<f64>,
    pub phi: Array2<f64>,
    pub lambda: Array2<f64>,
    pub sigma: Array2<f64>,
}

/// The link-side state and `gamma` of an earlier fit, used to restart
/// coordinate ascent near a previous optimum. `phi` is not kept: its first
/// update depends on `gamma` alone.
#[derive(Debug, Clone, PartialEq)]
pub struct WarmStart {
    pub gamma: Vec<f64>,
    pub lambda: Array2<f64>,
    pub sigma: Array2<f64>,
}

impl WarmStart {
    pub fn from_variational(var: &DocVariational) -> Self {
        Self {
            gamma: var.gamma.clone(),
            lambda: var.lambda.clone(),
            sigma: var.sigma.clone(),
        }
    }
}

/// Result of fitting one document's variational parameters.
#[derive(Debug, Clone)]
pub struct DocInference {
    pub variational: DocVariational,
    pub elbo: ElboTerms,
    /// Document ELBO at initialization and after every sweep.
    pub sweep_elbos: Vec<f64>,
}

/// Log-space views of the global parameters, built once per E-step sweep
/// over the corpus and shared read-only across documents.
pub struct EStepContext<'a> {
    params: &'a ModelParams,
    log_beta_t: Array2<f64>,
    log_eta: Array2<f64>,
    log_omega_t: Array2<f64>,
    alpha_norm: f64,
    use_links: bool,
}

impl<'a> EStepContext<'a> {
    pub fn new(params: &'a ModelParams, use_links: bool) -> Self {
        let log_beta_t = params.beta.t().mapv(f64::ln);
        let log_eta = params.eta.mapv(f64::ln);
        let log_omega_t = if use_links {
            params.omega.t().mapv(f64::ln)
        } else {
            Array2::zeros((0, params.k_doc()))
        };
        let alpha_sum: f64 = params.alpha.iter().sum();
        let alpha_norm = ln_gamma(alpha_sum) - params.alpha.iter().map(|&a| ln_gamma(a)).sum::<f64>();
        Self {
            params,
            log_beta_t,
            log_eta,
            log_omega_t,
            alpha_norm,
            use_links,
        }
    }

    pub fn params(&self) -> &ModelParams {
        self.params
    }

    /// The link tokens the model sees for `doc`.
    pub fn links<'d>(&self, doc: &'d Document) -> &'d [usize] {
        if self.use_links {
            &doc.links
        } else {
            &[]
        }
    }

    fn check_indices(&self, doc: &Document) -> Result<()> {
        let v = self.params.vocab_size();
        if let Some(&w) = doc.words.iter().find(|&&w| w >= v) {
            return Err(Error::invalid(format!(
                "document {:?}: word {w} outside vocabulary of {v}",
                doc.id
            )));
        }
        let d = self.params.n_targets();
        if let Some(&t) = self.links(doc).iter().find(|&&t| t >= d) {
            return Err(Error::invalid(format!(
                "document {:?}: link target {t} outside the {d} documents of omega",
                doc.id
            )));
        }
        Ok(())
    }

    /// Coordinate ascent on the document ELBO.
    ///
    /// Each sweep updates every `phi` row, recomputes `gamma`, updates every
    /// `lambda` row, recomputes `gamma`, then updates every `sigma` row. Each
    /// block update is an exact maximizer given the others, so the document
    /// ELBO never decreases between sweeps.
    pub fn infer(&self, doc: &Document, inner_tol: f64, inner_max_iters: usize) -> Result<DocInference> {
        self.infer_from(doc, None, inner_tol, inner_max_iters)
    }

    /// Like [`infer`](Self::infer), but starting from `start` instead of the
    /// uniform initialization when one is given.
    pub fn infer_from(
        &self,
        doc: &Document,
        start: Option<&WarmStart>,
        inner_tol: f64,
        inner_max_iters: usize,
    ) -> Result<DocInference> {
        self.check_indices(doc)?;
        let kw = self.params.k_word();
        let ky = self.params.k_doc();
        let words = &doc.words;
        let links = self.links(doc);
        let (n, l) = (words.len(), links.len());

        if n == 0 && l == 0 {
            return Ok(DocInference {
                variational: DocVariational {
                    gamma: self.params.alpha.clone(),
                    phi: Array2::zeros((0, kw)),
                    lambda: Array2::zeros((0, kw)),
                    sigma: Array2::zeros((0, ky)),
                },
                elbo: ElboTerms::default(),
                sweep_elbos: vec![0.0],
            });
        }

        let mut var = match start {
            None => {
                let spread = (n + l) as f64 / kw as f64;
                DocVariational {
                    gamma: self.params.alpha.iter().map(|&a| a + spread).collect(),
                    phi: Array2::from_elem((n, kw), 1.0 / kw as f64),
                    lambda: Array2::from_elem((l, kw), 1.0 / kw as f64),
                    sigma: Array2::from_elem((l, ky), 1.0 / ky as f64),
                }
            }
            Some(w) => {
                if w.gamma.len() != kw || w.lambda.dim() != (l, kw) || w.sigma.dim() != (l, ky) {
                    return Err(Error::invalid(format!(
                        "document {:?}: warm start does not match its shape",
                        doc.id
                    )));
                }
                DocVariational {
                    gamma: w.gamma.clone(),
                    phi: Array2::from_elem((n, kw), 1.0 / kw as f64),
                    lambda: w.lambda.clone(),
                    sigma: w.sigma.clone(),
                }
            }
        };
        let mut dg: Vec<f64> = var.gamma.iter().map(|&g| digamma(g)).collect();

        let mut prev = self.document_elbo(words, links, &var).total();
        let mut sweep_elbos = vec![prev];
        let mut scratch_w = vec![0.0; kw];
        let mut scratch_y = vec![0.0; ky];

        for _ in 0..inner_max_iters {
            for (row, &w) in var.phi.rows_mut().into_iter().zip(words) {
                let log_beta = self.log_beta_t.row(w);
                for k in 0..kw {
                    scratch_w[k] = log_beta[k] + dg[k];
                }
                normalize_log(&mut scratch_w).map_err(|_| Error::numerical("phi"))?;
                row.into_slice().expect("standard layout").copy_from_slice(&scratch_w);
            }
            recompute_gamma_into(&self.params.alpha, &var.phi, &var.lambda, &mut var.gamma);
            refresh_digamma(&var.gamma, &mut dg).map_err(|_| Error::numerical("gamma"))?;

            if l > 0 {
                for i in 0..l {
                    let sigma = var.sigma.row(i);
                    for k in 0..kw {
                        let log_eta = self.log_eta.row(k);
                        let mut acc = dg[k];
                        for kp in 0..ky {
                            acc += weighted_log(sigma[kp], log_eta[kp]);
                        }
                        scratch_w[k] = acc;
                    }
                    normalize_log(&mut scratch_w).map_err(|_| Error::numerical("lambda"))?;
                    var.lambda
                        .row_mut(i)
                        .as_slice_mut()
                        .expect("standard layout")
                        .copy_from_slice(&scratch_w);
                }
                recompute_gamma_into(&self.params.alpha, &var.phi, &var.lambda, &mut var.gamma);
                refresh_digamma(&var.gamma, &mut dg).map_err(|_| Error::numerical("gamma"))?;

                for (i, &target) in links.iter().enumerate() {
                    let lambda = var.lambda.row(i);
                    let log_omega = self.log_omega_t.row(target);
                    for kp in 0..ky {
                        let mut acc = log_omega[kp];
                        for k in 0..kw {
                            acc += weighted_log(lambda[k], self.log_eta[[k, kp]]);
                        }
                        scratch_y[kp] = acc;
                    }
                    normalize_log(&mut scratch_y).map_err(|_| Error::numerical("sigma"))?;
                    var.sigma
                        .row_mut(i)
                        .as_slice_mut()
                        .expect("standard layout")
                        .copy_from_slice(&scratch_y);
                }
            }

            let elbo = self.document_elbo(words, links, &var).total();
            if !elbo.is_finite() {
                return Err(Error::numerical("elbo"));
            }
            sweep_elbos.push(elbo);
            let gain = (elbo - prev) / prev.abs().max(f64::MIN_POSITIVE);
            prev = elbo;
            if gain < inner_tol {
                break;
            }
        }

        let elbo = self.document_elbo(words, links, &var);
        Ok(DocInference {
            variational: var,
            elbo,
            sweep_elbos,
        })
    }

    /// The document's share of the ELBO, split into the `theta` KL term,
    /// word terms and link terms.
    pub fn document_elbo(&self, words: &[usize], links: &[usize], var: &DocVariational) -> ElboTerms {
        let kw = self.params.k_word();
        let ky = self.params.k_doc();
        let alpha = &self.params.alpha;
        let gamma_sum: f64 = var.gamma.iter().sum();
        let dg_sum = digamma(gamma_sum);
        let e_log_theta: Vec<f64> = var.gamma.iter().map(|&g| digamma(g) - dg_sum).collect();

        // E[log p(theta | alpha)] - E[log q(theta | gamma)]
        let mut theta = self.alpha_norm - ln_gamma(gamma_sum);
        for k in 0..kw {
            theta += (alpha[k] - var.gamma[k]) * e_log_theta[k] + ln_gamma(var.gamma[k]);
        }

        let mut text = 0.0;
        for (row, &w) in var.phi.rows().into_iter().zip(words) {
            let log_beta = self.log_beta_t.row(w);
            for k in 0..kw {
                let p = row[k];
                if p > 0.0 {
                    text += p * (e_log_theta[k] + log_beta[k] - p.ln());
                }
            }
        }

        let mut link = 0.0;
        for (i, &target) in links.iter().enumerate() {
            let lambda = var.lambda.row(i);
            let sigma = var.sigma.row(i);
            for k in 0..kw {
                let p = lambda[k];
                if p > 0.0 {
                    link += p * (e_log_theta[k] - p.ln());
                    for kp in 0..ky {
                        link += p * weighted_log(sigma[kp], self.log_eta[[k, kp]]);
                    }
                }
            }
            let log_omega = self.log_omega_t.row(target);
            for kp in 0..ky {
                let s = sigma[kp];
                if s > 0.0 {
                    link += s * (log_omega[kp] - s.ln());
                }
            }
        }

        ElboTerms { theta, text, link }
    }
}

/// `p * log_q`, with the convention `0 * log 0 = 0`.
#[inline]
fn weighted_log(p: f64, log_q: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * log_q
    }
}

/// Exponentiates and normalizes a row of log-weights in place.
pub(crate) fn normalize_log(row: &mut [f64]) -> std::result::Result<(), ()> {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(());
    }
    let mut sum = 0.0;
    for x in row.iter_mut() {
        *x = (*x - max).exp();
        sum += *x;
    }
    for x in row.iter_mut() {
        *x /= sum;
    }
    Ok(())
}

fn refresh_digamma(gamma: &[f64], dg: &mut [f64]) -> std::result::Result<(), ()> {
    for (d, &g) in dg.iter_mut().zip(gamma) {
        if !(g > 0.0 && g.is_finite()) {
            return Err(());
        }
        *d = digamma(g);
    }
    Ok(())
}

fn recompute_gamma_into(alpha: &[f64], phi: &Array2<f64>, lambda: &Array2<f64>, gamma: &mut [f64]) {
    gamma.copy_from_slice(alpha);
    for row in phi.rows() {
        for (g, &p) in gamma.iter_mut().zip(row) {
            *g += p;
        }
    }
    for row in lambda.rows() {
        for (g, &p) in gamma.iter_mut().zip(row) {
            *g += p;
        }
    }
}

/// `gamma_k = alpha_k + Σ_n phi_nk + Σ_l lambda_lk`, accumulated in the same
/// order the E-step uses.
pub fn recompute_gamma(alpha: &[f64], phi: &Array2<f64>, lambda: &Array2<f64>) -> Vec<f64> {
    let mut gamma = vec![0.0; alpha.len()];
    recompute_gamma_into(alpha, phi, lambda, &mut gamma);
    gamma
}

/// One word-token responsibility row: `phi_k ∝ beta_k · exp(ψ(gamma_k))`.
pub fn phi_update(beta_column: &[f64], gamma: &[f64]) -> Result<Vec<f64>> {
    let mut row: Vec<f64> = beta_column
        .iter()
        .zip(gamma)
        .map(|(&b, &g)| b.ln() + digamma(g))
        .collect();
    normalize_log(&mut row).map_err(|_| Error::numerical("phi"))?;
    Ok(row)
}

/// One transition-topic row: `lambda_k ∝ exp(ψ(gamma_k) + Σ_k' sigma_k' log eta_kk')`.
pub fn lambda_update(gamma: &[f64], sigma_row: &[f64], eta: &Array2<f64>) -> Result<Vec<f64>> {
    let mut row: Vec<f64> = gamma
        .iter()
        .enumerate()
        .map(|(k, &g)| {
            digamma(g)
                + sigma_row
                    .iter()
                    .zip(eta.row(k))
                    .map(|(&s, &e)| weighted_log(s, e.ln()))
                    .sum::<f64>()
        })
        .collect();
    normalize_log(&mut row).map_err(|_| Error::numerical("lambda"))?;
    Ok(row)
}

/// One DocTopic row: `sigma_k' ∝ omega_k'd · exp(Σ_k lambda_k log eta_kk')`.
pub fn sigma_update(lambda_row: &[f64], eta: &Array2<f64>, omega_column: &[f64]) -> Result<Vec<f64>> {
    let mut row: Vec<f64> = omega_column
        .iter()
        .enumerate()
        .map(|(kp, &o)| {
            o.ln()
                + lambda_row
                    .iter()
                    .zip(eta.column(kp))
                    .map(|(&l, &e)| weighted_log(l, e.ln()))
                    .sum::<f64>()
        })
        .collect();
    normalize_log(&mut row).map_err(|_| Error::numerical("sigma"))?;
    Ok(row)
}

/// Fits one document against fixed global parameters and returns its
/// variational parameters with its ELBO contribution.
pub fn e_step_document(doc: &Document, params: &ModelParams, config: &TrainConfig) -> Result<(DocVariational, f64)> {
    let ctx = EStepContext::new(params, config.use_links);
    let out = ctx.infer(doc, config.inner_tol, config.inner_max_iters)?;
    Ok((out.variational, out.elbo.total()))
}
