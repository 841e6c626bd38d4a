use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::BufRead;

use log::warn;
use serde::{Deserialize, Serialize};

use super::{build_vocabulary, Corpus, Document, Tokenizer};
use crate::error::{Error, Result};

/// One line of the record stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawRecord {
    pub id: String,
    #[serde(default)]
    pub text: TextField,
    #[serde(default)]
    pub links: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TextField {
    Raw(String),
    Tokens(Vec<String>),
}

impl Default for TextField {
    fn default() -> Self {
        TextField::Tokens(Vec::new())
    }
}

impl TextField {
    fn terms(&self, tokenizer: Tokenizer) -> Vec<String> {
        match self {
            TextField::Raw(s) => tokenizer.tokenize(s),
            TextField::Tokens(t) => t.clone(),
        }
    }

    /// The first `max_chars` characters of the text, tokens joined by spaces.
    pub fn snippet(&self, max_chars: usize) -> String {
        match self {
            TextField::Raw(s) => s.chars().take(max_chars).collect(),
            TextField::Tokens(t) => t.join(" ").chars().take(max_chars).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestOptions {
    pub min_count: usize,
    pub stopwords: BTreeSet<String>,
    pub tokenizer: Tokenizer,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self {
            min_count: 5,
            stopwords: BTreeSet::new(),
            tokenizer: Tokenizer::Whitespace,
        }
    }
}

/// Counters for everything ingestion silently discarded.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub records: usize,
    pub dropped_unknown_links: usize,
    pub dropped_self_links: usize,
    pub dropped_word_tokens: usize,
}

#[derive(Debug, Clone)]
pub struct Ingested {
    pub corpus: Corpus,
    pub report: IngestReport,
}

/// Parses the record stream without building a corpus. Blank lines are skipped.
pub fn read_records<R: BufRead>(source: R) -> Result<Vec<RawRecord>> {
    let mut records = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RawRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        records.push(rec);
    }
    Ok(records)
}

/// Reads line-delimited `{"id", "text", "links"}` records into a corpus.
///
/// Document order follows input order. Links to unknown ids and self-links
/// are dropped and counted; terms outside the vocabulary are dropped.
pub fn ingest_corpus<R: BufRead>(source: R, options: &IngestOptions) -> Result<Ingested> {
    let records = read_records(source)?;
    ingest_records(&records, options)
}

/// Builds a corpus from already-parsed records.
pub fn ingest_records(records: &[RawRecord], options: &IngestOptions) -> Result<Ingested> {
    let mut position: HashMap<&str, usize> = HashMap::with_capacity(records.len());
    for (i, rec) in records.iter().enumerate() {
        if position.insert(rec.id.as_str(), i).is_some() {
            return Err(Error::Validation(format!("duplicate document id {:?}", rec.id)));
        }
    }

    let terms: Vec<Vec<String>> = records.iter().map(|r| r.text.terms(options.tokenizer)).collect();
    let stop: HashSet<String> = options.stopwords.iter().cloned().collect();
    let vocabulary = build_vocabulary(&terms, options.min_count, &stop)?;

    let mut report = IngestReport {
        records: records.len(),
        ..Default::default()
    };
    let mut documents = Vec::with_capacity(records.len());
    for (i, (rec, doc_terms)) in records.iter().zip(&terms).enumerate() {
        let words: Vec<usize> = doc_terms.iter().filter_map(|t| vocabulary.get(t)).collect();
        report.dropped_word_tokens += doc_terms.len() - words.len();
        let mut links = Vec::with_capacity(rec.links.len());
        for target in &rec.links {
            match position.get(target.as_str()) {
                Some(&j) if j == i => report.dropped_self_links += 1,
                Some(&j) => links.push(j),
                None => report.dropped_unknown_links += 1,
            }
        }
        documents.push(Document::new(rec.id.clone(), words, links));
    }
    if report.dropped_unknown_links > 0 {
        warn!(
            "dropped {} links to documents outside the corpus",
            report.dropped_unknown_links
        );
    }
    if report.dropped_self_links > 0 {
        warn!("dropped {} self-links", report.dropped_self_links);
    }
    let corpus = Corpus::new(documents, vocabulary)?;
    Ok(Ingested { corpus, report })
}
