use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{Corpus, Document, RawRecord, TextField, Vocabulary};
use crate::error::{Error, Result};

pub const DUMP_MAGIC: &str = "TOPICATLAS-CORPUS";
pub const DUMP_VERSION: u32 = 1;

#[derive(Serialize)]
struct DumpBodyRef<'a> {
    vocabulary: &'a Vocabulary,
    documents: &'a [Document],
}

#[derive(Deserialize)]
struct DumpBody {
    vocabulary: Vocabulary,
    documents: Vec<Document>,
}

/// Writes the indexed corpus: a `TOPICATLAS-CORPUS <version>` header line
/// followed by one JSON object.
pub fn write_dump<W: Write>(corpus: &Corpus, mut out: W) -> Result<()> {
    writeln!(out, "{DUMP_MAGIC} {DUMP_VERSION}")?;
    serde_json::to_writer(
        &mut out,
        &DumpBodyRef {
            vocabulary: corpus.vocabulary(),
            documents: corpus.documents(),
        },
    )?;
    writeln!(out)?;
    Ok(())
}

pub fn read_dump<R: BufRead>(mut input: R) -> Result<Corpus> {
    let mut header = String::new();
    input.read_line(&mut header)?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some(DUMP_MAGIC) {
        return Err(Error::Format {
            what: "corpus dump",
            detail: "missing magic header".into(),
        });
    }
    match parts.next().and_then(|v| v.parse::<u32>().ok()) {
        Some(DUMP_VERSION) => {}
        other => {
            return Err(Error::Format {
                what: "corpus dump",
                detail: format!("unsupported version {other:?}"),
            })
        }
    }
    let body: DumpBody = serde_json::from_reader(input)?;
    Corpus::new(body.documents, body.vocabulary)
}

/// Writes the corpus back out as ingestible records, text as token arrays.
pub fn write_records<W: Write>(corpus: &Corpus, mut out: W) -> Result<()> {
    let vocab = corpus.vocabulary();
    for doc in corpus.documents() {
        let rec = RawRecord {
            id: doc.id.clone(),
            text: TextField::Tokens(doc.words.iter().map(|&w| vocab.term(w).to_owned()).collect()),
            links: doc.links.iter().map(|&t| corpus.document(t).id.clone()).collect(),
        };
        serde_json::to_writer(&mut out, &rec)?;
        writeln!(out)?;
    }
    Ok(())
}
