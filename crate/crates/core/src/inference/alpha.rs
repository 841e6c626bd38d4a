use crate::special::{digamma, ln_gamma, trigamma};

const MAX_NEWTON_ITERS: usize = 100;
const MIN_STEP_SCALE: f64 = 1e-30;
const REL_CHANGE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaUpdate {
    pub alpha: Vec<f64>,
    pub iterations: usize,
    /// False when the iteration cap or step-halving floor was hit; `alpha`
    /// then holds the last accepted iterate.
    pub converged: bool,
}

/// The part of the corpus ELBO that depends on `alpha`:
/// `D·(ln Γ(Σα) − Σ ln Γ(α_k)) + Σ (α_k − 1)·S_k`.
pub fn alpha_objective(alpha: &[f64], gamma_log_sums: &[f64], n_docs: usize) -> f64 {
    let d = n_docs as f64;
    let sum: f64 = alpha.iter().sum();
    let mut f = d * ln_gamma(sum);
    for (&a, &s) in alpha.iter().zip(gamma_log_sums) {
        f += -d * ln_gamma(a) + (a - 1.0) * s;
    }
    f
}

/// Newton–Raphson for an asymmetric Dirichlet prior.
///
/// The Hessian is `diag(h) + z·11ᵀ`, so each step costs O(K). A step that
/// leaves the positive orthant or lowers the objective is halved until it
/// does neither.
pub fn update_alpha(gamma_log_sums: &[f64], alpha: &[f64], n_docs: usize) -> AlphaUpdate {
    let mut a = alpha.to_vec();
    if n_docs == 0 {
        return AlphaUpdate {
            alpha: a,
            iterations: 0,
            converged: true,
        };
    }
    let d = n_docs as f64;
    let mut f = alpha_objective(&a, gamma_log_sums, n_docs);
    let mut step = vec![0.0; a.len()];
    let mut cand = vec![0.0; a.len()];

    for it in 0..MAX_NEWTON_ITERS {
        let sum: f64 = a.iter().sum();
        let dg_sum = digamma(sum);
        let z = d * trigamma(sum);
        let mut num = 0.0;
        let mut den = 1.0 / z;
        for k in 0..a.len() {
            let g = d * (dg_sum - digamma(a[k])) + gamma_log_sums[k];
            let h = -d * trigamma(a[k]);
            step[k] = g;
            num += g / h;
            den += 1.0 / h;
            cand[k] = h;
        }
        let c = num / den;
        for k in 0..a.len() {
            step[k] = (step[k] - c) / cand[k];
        }
        if step.iter().all(|&s| s == 0.0) {
            return AlphaUpdate {
                alpha: a,
                iterations: it,
                converged: true,
            };
        }

        let mut scale = 1.0;
        let accepted = loop {
            for k in 0..a.len() {
                cand[k] = a[k] - scale * step[k];
            }
            if cand.iter().all(|&x| x > 0.0 && x.is_finite()) {
                let fc = alpha_objective(&cand, gamma_log_sums, n_docs);
                if fc.is_finite() && fc >= f - 1e-14 * f.abs().max(1.0) {
                    f = fc;
                    break true;
                }
            }
            scale *= 0.5;
            if scale < MIN_STEP_SCALE {
                break false;
            }
        };
        if !accepted {
            return AlphaUpdate {
                alpha: a,
                iterations: it + 1,
                converged: false,
            };
        }
        let rel = a
            .iter()
            .zip(&cand)
            .map(|(&old, &new)| ((new - old) / old).abs())
            .fold(0.0, f64::max);
        a.copy_from_slice(&cand);
        if rel < REL_CHANGE_TOL {
            return AlphaUpdate {
                alpha: a,
                iterations: it + 1,
                converged: true,
            };
        }
    }
    AlphaUpdate {
        alpha: a,
        iterations: MAX_NEWTON_ITERS,
        converged: false,
    }
}
