//! Text-network corpora: documents carrying a bag of words and a bag of links.
//!
//! A [`Corpus`] is immutable once built. Word tokens are indices into the
//! [`Vocabulary`]; link tokens are positions of other documents in the same
//! corpus. Duplicate links are kept as repeated tokens.

mod dump;
mod filter;
mod folds;
mod ingest;
mod tokenize;
mod vocab;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use dump::{read_dump, write_dump, write_records, DUMP_MAGIC, DUMP_VERSION};
pub use filter::filter_by_link_count;
pub use folds::{split_folds, FoldAssignment};
pub use ingest::{
    ingest_corpus, ingest_records, read_records, IngestOptions, IngestReport, Ingested, RawRecord, TextField,
};
pub use tokenize::{simple_tokenize, Tokenizer};
pub use vocab::{build_vocabulary, Vocabulary};

/// One vertex of the text network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    /// Vocabulary indices, in text order.
    pub words: Vec<usize>,
    /// Positions of linked documents within the owning corpus.
    pub links: Vec<usize>,
}

impl Document {
    pub fn new(id: impl Into<String>, words: Vec<usize>, links: Vec<usize>) -> Self {
        Self {
            id: id.into(),
            words,
            links,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty() && self.links.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    documents: Vec<Document>,
    vocabulary: Vocabulary,
}

impl Corpus {
    /// Validates ids, word indices and link targets.
    pub fn new(documents: Vec<Document>, vocabulary: Vocabulary) -> Result<Self> {
        let d = documents.len();
        let v = vocabulary.len();
        let mut seen = HashSet::with_capacity(d);
        for doc in &documents {
            if !seen.insert(doc.id.as_str()) {
                return Err(Error::Validation(format!("duplicate document id {:?}", doc.id)));
            }
            if let Some(&w) = doc.words.iter().find(|&&w| w >= v) {
                return Err(Error::Validation(format!(
                    "document {:?}: word index {w} out of range for vocabulary of {v}",
                    doc.id
                )));
            }
            if let Some(&l) = doc.links.iter().find(|&&l| l >= d) {
                return Err(Error::Validation(format!(
                    "document {:?}: link target {l} out of range for {d} documents",
                    doc.id
                )));
            }
        }
        Ok(Self { documents, vocabulary })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn document(&self, index: usize) -> &Document {
        &self.documents[index]
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.documents.iter().position(|d| d.id == id)
    }

    pub fn total_words(&self) -> usize {
        self.documents.iter().map(|d| d.words.len()).sum()
    }

    pub fn total_links(&self) -> usize {
        self.documents.iter().map(|d| d.links.len()).sum()
    }

    /// Same documents and vocabulary with every link token removed.
    pub fn without_links(&self) -> Corpus {
        let documents = self
            .documents
            .iter()
            .map(|d| Document::new(d.id.clone(), d.words.clone(), Vec::new()))
            .collect();
        Corpus {
            documents,
            vocabulary: self.vocabulary.clone(),
        }
    }

    /// Per-document word counts, `counts[d]` as sorted `(word, count)` pairs.
    pub fn word_counts(&self) -> Vec<Vec<(usize, usize)>> {
        self.documents
            .iter()
            .map(|doc| {
                let mut words = doc.words.clone();
                words.sort_unstable();
                let mut out: Vec<(usize, usize)> = Vec::new();
                for w in words {
                    match out.last_mut() {
                        Some((last, c)) if *last == w => *c += 1,
                        _ => out.push((w, 1)),
                    }
                }
                out
            })
            .collect()
    }

    /// Hex SHA-256 of the canonical dump encoding.
    pub fn content_hash(&self) -> String {
        let mut buf = Vec::new();
        write_dump(self, &mut buf).expect("writing to a Vec cannot fail");
        hex::encode(Sha256::digest(&buf))
    }
}
