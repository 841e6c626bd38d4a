//! Joint topic modelling of text networks.
//!
//! Documents carry a bag of words and a bag of links. The model learns two
//! kinds of topics: WordTopics (distributions over the vocabulary) and
//! DocTopics (distributions over the documents of the corpus), tied together
//! by a WordTopic → DocTopic transition matrix. From a fitted model the
//! [`topicweb`] module builds a heterogeneous graph with Word-Word, Doc-Doc
//! and Word-Doc edges weighted by co-occurrence probability.
//!
//! ```
//! use topicatlas::corpus::{ingest_corpus, IngestOptions};
//! use topicatlas::inference::{train, TrainConfig};
//!
//! let records = r#"{"id": "a", "text": "graph topic graph", "links": ["b"]}
//! {"id": "b", "text": "topic model", "links": []}
//! {"id": "c", "text": "graph model", "links": ["a", "b"]}"#;
//! let options = IngestOptions { min_count: 1, ..Default::default() };
//! let corpus = ingest_corpus(records.as_bytes(), &options)?.corpus;
//!
//! let config = TrainConfig { k_word: 2, k_doc: 2, outer_max_iters: 5, ..Default::default() };
//! let model = train(&corpus, &config)?;
//! assert_eq!(model.params.beta.dim(), (2, 3));
//! # Ok::<(), topicatlas::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod corpus;
pub mod evaluation;
pub mod inference;
pub mod parallel;
pub mod special;
pub mod topicweb;

mod error;

pub use error::{Error, Result};
