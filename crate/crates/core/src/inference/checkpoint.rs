use std::io::{Read, Write};

use ndarray::Array2;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{DocSummary, ModelParams, TrainConfig, TrainedModel};
use crate::corpus::IngestOptions;
use crate::error::{Error, Result};

pub const CHECKPOINT_FORMAT: &str = "topicatlas-model";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub k_word: usize,
    pub k_doc: usize,
    pub vocab_size: usize,
    pub n_targets: usize,
}

/// On-disk form of a [`TrainedModel`]: dense parameter rows, the training
/// config, the corpus hash, and the ELBO trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CheckpointFile {
    format: String,
    version: u32,
    dims: Dims,
    alpha: Vec<f64>,
    beta: Vec<Vec<f64>>,
    eta: Vec<Vec<f64>>,
    omega: Vec<Vec<f64>>,
    config: TrainConfig,
    corpus_hash: String,
    elbo_trace: Vec<f64>,
    converged: bool,
    alpha_warning: bool,
    summaries: Vec<DocSummary>,
    #[serde(default)]
    ingest: Option<IngestOptions>,
}

fn rows(m: &Array2<f64>) -> Vec<Vec<f64>> {
    m.rows().into_iter().map(|r| r.to_vec()).collect()
}

fn matrix(name: &str, rows: Vec<Vec<f64>>, nrows: usize, ncols: usize) -> Result<Array2<f64>> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Format {
            what: "model checkpoint",
            detail: format!("{name} is not {nrows} x {ncols}"),
        });
    }
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Ok(Array2::from_shape_vec((nrows, ncols), flat).expect("shape checked"))
}

/// Serializes `model` (and optionally the ingestion settings that produced
/// its corpus) to `out`. The encoding is deterministic.
pub fn save_checkpoint<W: Write>(model: &TrainedModel, ingest: Option<&IngestOptions>, mut out: W) -> Result<()> {
    let p = &model.params;
    let file = CheckpointFile {
        format: CHECKPOINT_FORMAT.into(),
        version: CHECKPOINT_VERSION,
        dims: Dims {
            k_word: p.k_word(),
            k_doc: p.k_doc(),
            vocab_size: p.vocab_size(),
            n_targets: p.n_targets(),
        },
        alpha: p.alpha.clone(),
        beta: rows(&p.beta),
        eta: rows(&p.eta),
        omega: rows(&p.omega),
        config: model.config.clone(),
        corpus_hash: model.corpus_hash.clone(),
        elbo_trace: model.elbo_trace.clone(),
        converged: model.converged,
        alpha_warning: model.alpha_warning,
        summaries: model.summaries.clone(),
        ingest: ingest.cloned(),
    };
    serde_json::to_writer(&mut out, &file)?;
    writeln!(out)?;
    Ok(())
}

pub fn load_checkpoint<R: Read>(input: R) -> Result<(TrainedModel, Option<IngestOptions>)> {
    let file: CheckpointFile = serde_json::from_reader(input)?;
    if file.format != CHECKPOINT_FORMAT {
        return Err(Error::Format {
            what: "model checkpoint",
            detail: format!("unexpected format tag {:?}", file.format),
        });
    }
    if file.version != CHECKPOINT_VERSION {
        return Err(Error::Format {
            what: "model checkpoint",
            detail: format!("unsupported version {}", file.version),
        });
    }
    let Dims {
        k_word,
        k_doc,
        vocab_size,
        n_targets,
    } = file.dims;
    if file.alpha.len() != k_word {
        return Err(Error::Format {
            what: "model checkpoint",
            detail: "alpha length does not match k_word".into(),
        });
    }
    let params = ModelParams {
        alpha: file.alpha,
        beta: matrix("beta", file.beta, k_word, vocab_size)?,
        eta: matrix("eta", file.eta, k_word, k_doc)?,
        omega: matrix("omega", file.omega, k_doc, n_targets)?,
    };
    params.validate()?;
    let model = TrainedModel {
        params,
        summaries: file.summaries,
        elbo_trace: file.elbo_trace,
        corpus_hash: file.corpus_hash,
        config: file.config,
        converged: file.converged,
        alpha_warning: file.alpha_warning,
    };
    Ok((model, file.ingest))
}

/// Hex SHA-256 of the checkpoint encoding.
pub fn checkpoint_hash(model: &TrainedModel, ingest: Option<&IngestOptions>) -> String {
    let mut buf = Vec::new();
    save_checkpoint(model, ingest, &mut buf).expect("writing to a Vec cannot fail");
    hex::encode(Sha256::digest(&buf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Corpus, Document, Vocabulary};
    use crate::inference::train;

    fn model() -> TrainedModel {
        let v = Vocabulary::from_terms((0..3).map(|i| format!("w{i}"))).unwrap();
        let c = Corpus::new(
            vec![
                Document::new("a", vec![0, 1, 1], vec![1]),
                Document::new("b", vec![2, 2, 0], vec![0, 0]),
            ],
            v,
        )
        .unwrap();
        let cfg = TrainConfig {
            k_word: 2,
            k_doc: 2,
            outer_max_iters: 3,
            ..Default::default()
        };
        train(&c, &cfg).unwrap()
    }

    #[test]
    fn round_trip_is_lossless() {
        let m = model();
        let ingest = IngestOptions::default();
        let mut buf = Vec::new();
        save_checkpoint(&m, Some(&ingest), &mut buf).unwrap();
        let (back, ing) = load_checkpoint(buf.as_slice()).unwrap();
        assert_eq!(back, m);
        assert_eq!(ing, Some(ingest));
        let mut again = Vec::new();
        save_checkpoint(&back, ing.as_ref(), &mut again).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn hash_is_stable() {
        assert_eq!(checkpoint_hash(&model(), None), checkpoint_hash(&model(), None));
    }

    #[test]
    fn rejects_foreign_files() {
        let m = model();
        let mut buf = Vec::new();
        save_checkpoint(&m, None, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let bad = text.replace("topicatlas-model", "something-else");
        assert!(load_checkpoint(bad.as_bytes()).is_err());
        let bad = text.replace("\"version\":1", "\"version\":2");
        assert!(load_checkpoint(bad.as_bytes()).is_err());
    }
}
