//! Canonical JSON encoding of a [`TopicWeb`].
//!
//! Object keys come out sorted (struct fields are declared alphabetically)
//! and every float is rounded to 10 significant digits, so
//! export → parse → export reproduces the same bytes.

use std::collections::HashSet;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{NodeId, TopicWeb};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub edges: Vec<GraphEdge>,
    pub meta: GraphMeta,
    pub nodes: Vec<GraphNode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphMeta {
    pub kw: usize,
    pub ky: usize,
    pub model_hash: String,
    pub prior: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphNode {
    pub dominance: f64,
    pub id: String,
    pub keywords: Vec<String>,
    pub kind: String,
    pub top_docs: Vec<TopDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopDoc {
    pub doc: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphEdge {
    pub cooccurrence: f64,
    pub dst: String,
    pub kind: String,
    pub src: String,
    pub weight: f64,
}

/// Rounds to 10 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.9e}").parse().expect("formatted float parses")
}

impl GraphDocument {
    pub fn from_web(web: &TopicWeb) -> Self {
        let nodes = web
            .nodes
            .iter()
            .map(|n| GraphNode {
                dominance: round_sig(n.dominance),
                id: n.id.to_string(),
                keywords: n.keywords.clone(),
                kind: if n.id.is_word() { "word" } else { "doc" }.into(),
                top_docs: n
                    .top_documents
                    .iter()
                    .map(|(doc, w)| TopDoc {
                        doc: doc.clone(),
                        weight: round_sig(*w),
                    })
                    .collect(),
            })
            .collect();
        let edges = web
            .edges
            .iter()
            .map(|e| GraphEdge {
                cooccurrence: round_sig(e.cooccurrence),
                dst: e.dst.to_string(),
                kind: e.kind.code().into(),
                src: e.src.to_string(),
                weight: round_sig(e.weight),
            })
            .collect();
        GraphDocument {
            edges,
            meta: GraphMeta {
                kw: web.k_word,
                ky: web.k_doc,
                model_hash: web.model_hash.clone(),
                prior: round_sig(web.prior_edge_probability),
                threshold: round_sig(web.prune_threshold),
            },
            nodes,
        }
    }

    pub fn node(&self, id: &str) -> Option<&GraphNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    /// Edges touching `id`, heaviest first (ties keep file order).
    pub fn incident_edges(&self, id: &str) -> Vec<&GraphEdge> {
        let mut out: Vec<&GraphEdge> = self.edges.iter().filter(|e| e.src == id || e.dst == id).collect();
        out.sort_by(|a, b| b.weight.total_cmp(&a.weight));
        out
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = serde_json::to_vec_pretty(self).expect("graph serializes");
        buf.push(b'\n');
        buf
    }
}

pub fn export_graph<W: Write>(web: &TopicWeb, mut out: W) -> Result<()> {
    let doc = GraphDocument::from_web(web);
    validate_graph(&doc)?;
    out.write_all(&doc.to_bytes())?;
    Ok(())
}

/// Parses and schema-checks a graph file.
pub fn parse_graph(bytes: &[u8]) -> Result<GraphDocument> {
    let doc: GraphDocument = serde_json::from_slice(bytes)?;
    validate_graph(&doc)?;
    Ok(doc)
}

fn schema(detail: impl Into<String>) -> Error {
    Error::Format {
        what: "topic graph",
        detail: detail.into(),
    }
}

/// Structural checks beyond what deserialization enforces.
pub fn validate_graph(doc: &GraphDocument) -> Result<()> {
    let meta = &doc.meta;
    if !(meta.prior > 0.0) || !meta.prior.is_finite() {
        return Err(schema("prior must be positive"));
    }
    if !(meta.threshold >= 0.0) {
        return Err(schema("threshold must be non-negative"));
    }
    if doc.nodes.len() != meta.kw + meta.ky {
        return Err(schema(format!(
            "expected {} nodes, found {}",
            meta.kw + meta.ky,
            doc.nodes.len()
        )));
    }
    let mut seen = HashSet::new();
    for node in &doc.nodes {
        let id: NodeId = node
            .id
            .parse()
            .map_err(|_| schema(format!("bad node id {:?}", node.id)))?;
        let (kind, bound) = if id.is_word() {
            ("word", meta.kw)
        } else {
            ("doc", meta.ky)
        };
        if node.kind != kind || id.index() >= bound {
            return Err(schema(format!(
                "node {} has kind {:?} or is out of range",
                node.id, node.kind
            )));
        }
        if !seen.insert(node.id.as_str()) {
            return Err(schema(format!("duplicate node {}", node.id)));
        }
        if !(0.0..=1.0).contains(&node.dominance) {
            return Err(schema(format!("node {} dominance outside [0, 1]", node.id)));
        }
        if id.is_word() && !node.top_docs.is_empty() {
            return Err(schema(format!("WordTopic {} lists documents", node.id)));
        }
    }
    for e in &doc.edges {
        let src: NodeId = e
            .src
            .parse()
            .map_err(|_| schema(format!("bad edge endpoint {:?}", e.src)))?;
        let dst: NodeId = e
            .dst
            .parse()
            .map_err(|_| schema(format!("bad edge endpoint {:?}", e.dst)))?;
        if !seen.contains(e.src.as_str()) || !seen.contains(e.dst.as_str()) {
            return Err(schema(format!("edge {}-{} references a missing node", e.src, e.dst)));
        }
        let ok = match e.kind.as_str() {
            "ww" => src.is_word() && dst.is_word() && src.index() < dst.index(),
            "dd" => !src.is_word() && !dst.is_word() && src.index() < dst.index(),
            "wd" => src.is_word() && !dst.is_word(),
            _ => false,
        };
        if !ok {
            return Err(schema(format!(
                "edge {}-{} inconsistent with kind {:?}",
                e.src, e.dst, e.kind
            )));
        }
        if !(0.0..=1.0).contains(&e.cooccurrence) || !(e.weight >= 0.0) {
            return Err(schema(format!("edge {}-{} has invalid values", e.src, e.dst)));
        }
        if e.weight < meta.threshold {
            return Err(schema(format!(
                "edge {}-{} is below the pruning threshold",
                e.src, e.dst
            )));
        }
    }
    Ok(())
}
