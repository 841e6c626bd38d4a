//! The heterogeneous topic web.
//!
//! A fitted model yields three co-occurrence matrices over topics:
//! Word-Word (`K_w × K_w`), Doc-Doc (`K_y × K_y`) and Word-Doc
//! (`K_w × K_y`). Each entry divided by the probability of a random edge
//! becomes an edge weight; edges at or above the pruning threshold are kept.
//! Nodes carry their corpus-level dominance and human-readable labels.

mod export;
mod labels;
mod posterior;
mod strength;
mod web;

pub use export::{
    export_graph, parse_graph, round_sig, validate_graph, GraphDocument, GraphEdge, GraphMeta, GraphNode, TopDoc,
};
pub use labels::{indicative_words, top_documents, top_indices, top_keywords, word_expectancy};
pub use posterior::{posterior_stats, theta_hat_row, PosteriorStats};
pub use strength::{doc_doc_strength, word_doc_strength, word_word_strength};
pub use web::{
    build_topic_web, edge_weight, EdgeKind, EdgePrior, NodeId, TopicEdge, TopicNode, TopicWeb, WebOptions,
    DEFAULT_INDICATIVE_WORDS, DEFAULT_KEYWORDS, DEFAULT_PRIOR_EDGE_PROBABILITY, DEFAULT_PRUNE_THRESHOLD,
    DEFAULT_TOP_DOCUMENTS,
};
