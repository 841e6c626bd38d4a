use super::{Corpus, Document};
use crate::error::{Error, Result};

/// Keeps documents with at least `min_links` link tokens.
///
/// Links into removed documents are dropped and the survivors re-indexed.
/// Because dropping links can push a survivor below the threshold, removal
/// repeats until no document falls short, which makes the filter idempotent.
pub fn filter_by_link_count(corpus: &Corpus, min_links: usize) -> Result<Corpus> {
    if min_links == 0 {
        return Ok(corpus.clone());
    }
    let d = corpus.len();
    let mut keep = vec![true; d];
    loop {
        let mut changed = false;
        for (i, doc) in corpus.documents().iter().enumerate() {
            if !keep[i] {
                continue;
            }
            let live = doc.links.iter().filter(|&&t| keep[t]).count();
            if live < min_links {
                keep[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut new_index = vec![usize::MAX; d];
    let mut next = 0;
    for i in 0..d {
        if keep[i] {
            new_index[i] = next;
            next += 1;
        }
    }
    if next == 0 {
        return Err(Error::Validation(format!("no document has at least {min_links} links")));
    }
    let documents = corpus
        .documents()
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(doc, _)| {
            let links = doc.links.iter().filter(|&&t| keep[t]).map(|&t| new_index[t]).collect();
            Document::new(doc.id.clone(), doc.words.clone(), links)
        })
        .collect();
    Corpus::new(documents, corpus.vocabulary().clone())
}
