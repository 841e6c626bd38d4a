use rand::distr::weighted::WeightedIndex;
use rand::distr::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Gamma;

use super::ModelParams;
use crate::corpus::{Corpus, Document, Vocabulary};
use crate::error::{Error, Result};

/// Forward sampler of the generative process.
///
/// For document `i`: draw `θ_i ~ Dir(α)`; each word draws a WordTopic from
/// `θ_i` then a word from that topic's `beta` row; each link draws a
/// transition WordTopic from `θ_i`, a DocTopic from that topic's `eta` row,
/// then a target document from the DocTopic's `omega` row.
///
/// Terms are named `w000…`, documents `d000…`. Self-links are kept.
pub fn generate_corpus(
    params: &ModelParams,
    doc_lengths: &[usize],
    link_counts: &[usize],
    seed: u64,
) -> Result<Corpus> {
    params.validate()?;
    let d = doc_lengths.len();
    if link_counts.len() != d {
        return Err(Error::invalid("doc_lengths and link_counts differ in length"));
    }
    if params.n_targets() != d {
        return Err(Error::invalid(format!(
            "omega covers {} documents but {d} were requested",
            params.n_targets()
        )));
    }
    let rows = |m: &ndarray::Array2<f64>| -> Result<Vec<WeightedIndex<f64>>> {
        m.rows()
            .into_iter()
            .map(|r| WeightedIndex::new(r.iter().copied()).map_err(|e| Error::invalid(e.to_string())))
            .collect()
    };
    let beta = rows(&params.beta)?;
    let eta = rows(&params.eta)?;
    let omega = rows(&params.omega)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut documents = Vec::with_capacity(d);
    for i in 0..d {
        let theta = sample_dirichlet(&params.alpha, &mut rng)?;
        let theta = WeightedIndex::new(&theta).map_err(|e| Error::invalid(e.to_string()))?;
        let words = (0..doc_lengths[i])
            .map(|_| beta[theta.sample(&mut rng)].sample(&mut rng))
            .collect();
        let links = (0..link_counts[i])
            .map(|_| {
                let t = theta.sample(&mut rng);
                let z = eta[t].sample(&mut rng);
                omega[z].sample(&mut rng)
            })
            .collect();
        documents.push(Document::new(format!("d{i:03}"), words, links));
    }
    let vocabulary = Vocabulary::from_terms((0..params.vocab_size()).map(|w| format!("w{w:03}")))?;
    Corpus::new(documents, vocabulary)
}

/// Ground-truth parameters for simulation studies: every row of `beta`,
/// `eta` and `omega` is a symmetric `Dir(concentration)` draw. Small
/// concentrations give sparse, well-separated topics.
pub fn sample_params(
    k_word: usize,
    k_doc: usize,
    vocab_size: usize,
    n_targets: usize,
    alpha: f64,
    concentration: f64,
    seed: u64,
) -> Result<ModelParams> {
    if k_word == 0 || k_doc == 0 || vocab_size == 0 || n_targets == 0 {
        return Err(Error::invalid("model dimensions must be non-zero"));
    }
    if !(alpha > 0.0) || !(concentration > 0.0) {
        return Err(Error::invalid("alpha and concentration must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |rows: usize, cols: usize| -> Result<ndarray::Array2<f64>> {
        let conc = vec![concentration; cols];
        let mut flat = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            flat.extend(sample_dirichlet(&conc, &mut rng)?);
        }
        Ok(ndarray::Array2::from_shape_vec((rows, cols), flat).expect("shape"))
    };
    let params = ModelParams {
        alpha: vec![alpha; k_word],
        beta: draw(k_word, vocab_size)?,
        eta: draw(k_word, k_doc)?,
        omega: draw(k_doc, n_targets)?,
    };
    params.validate()?;
    Ok(params)
}

/// Dirichlet draw via normalized Gamma variates. Works in log space, using
/// `Gamma(a) = Gamma(a + 1) · U^(1/a)`, so tiny concentrations do not
/// underflow to an all-zero vector.
pub(crate) fn sample_dirichlet<R: Rng>(alpha: &[f64], rng: &mut R) -> Result<Vec<f64>> {
    let mut logs = Vec::with_capacity(alpha.len());
    for &a in alpha {
        let g = Gamma::new(a + 1.0, 1.0).map_err(|e| Error::invalid(e.to_string()))?;
        let u: f64 = Open01.sample(rng);
        logs.push(g.sample(rng).ln() + u.ln() / a);
    }
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = logs.iter().map(|&l| (l - max).exp()).collect();
    let s: f64 = out.iter().sum();
    out.iter_mut().for_each(|x| *x /= s);
    Ok(out)
}
