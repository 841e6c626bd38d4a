use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use anyhow::{bail, Context};
use log::info;
use sha2::{Digest, Sha256};
use topicatlas::corpus::{
    filter_by_link_count, ingest_records, read_dump, read_records, Corpus, IngestOptions, RawRecord, TextField,
    DUMP_MAGIC,
};
use topicatlas::inference::{load_checkpoint, TrainedModel};

use crate::args::CorpusFlags;

pub const SNIPPET_CHARS: usize = 200;

pub struct LoadedCorpus {
    pub corpus: Corpus,
    /// Original text by document id, when the corpus was read from records.
    pub texts: Option<HashMap<String, TextField>>,
}

impl LoadedCorpus {
    /// First characters of a document's text.
    pub fn snippet(&self, position: usize) -> String {
        match &self.texts {
            Some(texts) => texts
                .get(&self.corpus.document(position).id)
                .map(|t| t.snippet(SNIPPET_CHARS))
                .unwrap_or_default(),
            None => {
                let vocab = self.corpus.vocabulary();
                let words: Vec<&str> = self
                    .corpus
                    .document(position)
                    .words
                    .iter()
                    .map(|&w| vocab.term(w))
                    .collect();
                words.join(" ").chars().take(SNIPPET_CHARS).collect()
            }
        }
    }
}

pub fn ingest_options(flags: &CorpusFlags) -> anyhow::Result<IngestOptions> {
    let stopwords = match &flags.stopwords {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(str::to_owned)
                .collect()
        }
        None => BTreeSet::new(),
    };
    Ok(IngestOptions {
        min_count: flags.min_count,
        stopwords,
        tokenizer: flags.tokenizer.into(),
    })
}

fn is_dump(path: &Path) -> anyhow::Result<bool> {
    let mut first = String::new();
    BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?).read_line(&mut first)?;
    Ok(first.starts_with(DUMP_MAGIC))
}

/// Reads a corpus dump as is, or ingests records and applies the link filter.
pub fn load_corpus(path: &Path, options: &IngestOptions, min_links: usize) -> anyhow::Result<LoadedCorpus> {
    if is_dump(path)? {
        let corpus =
            read_dump(BufReader::new(File::open(path)?)).with_context(|| format!("reading {}", path.display()))?;
        return Ok(LoadedCorpus { corpus, texts: None });
    }
    let records =
        read_records(BufReader::new(File::open(path)?)).with_context(|| format!("reading {}", path.display()))?;
    let ingested = ingest_records(&records, options)?;
    let corpus = filter_by_link_count(&ingested.corpus, min_links)?;
    info!(
        "corpus: {} documents, {} terms, {} word tokens, {} link tokens",
        corpus.len(),
        corpus.vocabulary().len(),
        corpus.total_words(),
        corpus.total_links()
    );
    let texts = records.into_iter().map(|r: RawRecord| (r.id, r.text)).collect();
    Ok(LoadedCorpus {
        corpus,
        texts: Some(texts),
    })
}

pub struct LoadedModel {
    pub model: TrainedModel,
    pub ingest: Option<IngestOptions>,
    /// SHA-256 of the checkpoint file.
    pub hash: String,
}

pub fn load_model(path: &Path) -> anyhow::Result<LoadedModel> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let (model, ingest) = load_checkpoint(bytes.as_slice()).with_context(|| format!("loading {}", path.display()))?;
    Ok(LoadedModel {
        model,
        ingest,
        hash: hex_sha256(&bytes),
    })
}

pub fn hex_sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Loads the corpus a checkpoint was trained on, refusing any other.
pub fn load_matching_corpus(model: &LoadedModel, path: &Path, min_links: usize) -> anyhow::Result<LoadedCorpus> {
    let options = model.ingest.clone().unwrap_or_default();
    let loaded = load_corpus(path, &options, min_links)?;
    let hash = loaded.corpus.content_hash();
    if hash != model.model.corpus_hash {
        bail!(
            "corpus {} (hash {hash}) is not the corpus the model was trained on (hash {}); \
             pass the corpus.dump written by `train`, or the same records with the same --min-links",
            path.display(),
            model.model.corpus_hash
        );
    }
    Ok(loaded)
}
