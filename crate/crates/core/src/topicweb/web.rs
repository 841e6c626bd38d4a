use std::fmt;
use std::str::FromStr;

use ndarray::Array2;

use super::{
    doc_doc_strength, indicative_words, posterior_stats, top_documents, top_keywords, word_doc_strength,
    word_word_strength,
};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::inference::{checkpoint_hash, TrainedModel};

/// Probability of a random edge used as the null level for edge weights.
pub const DEFAULT_PRIOR_EDGE_PROBABILITY: f64 = 0.0002;
pub const DEFAULT_PRUNE_THRESHOLD: f64 = 1.0;
pub const DEFAULT_KEYWORDS: usize = 10;
pub const DEFAULT_TOP_DOCUMENTS: usize = 5;
pub const DEFAULT_INDICATIVE_WORDS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeId {
    Word(usize),
    Doc(usize),
}

impl NodeId {
    pub fn index(self) -> usize {
        match self {
            NodeId::Word(k) | NodeId::Doc(k) => k,
        }
    }

    pub fn is_word(self) -> bool {
        matches!(self, NodeId::Word(_))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Word(k) => write!(f, "w{k}"),
            NodeId::Doc(k) => write!(f, "d{k}"),
        }
    }
}

impl FromStr for NodeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("malformed topic id {s:?}"));
        let (kind, digits) = s.split_at_checked(1).ok_or_else(bad)?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let k: usize = digits.parse().map_err(|_| bad())?;
        match kind {
            "w" => Ok(NodeId::Word(k)),
            "d" => Ok(NodeId::Doc(k)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    WordWord,
    DocDoc,
    WordDoc,
}

impl EdgeKind {
    pub fn code(self) -> &'static str {
        match self {
            EdgeKind::WordWord => "ww",
            EdgeKind::DocDoc => "dd",
            EdgeKind::WordDoc => "wd",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopicNode {
    pub id: NodeId,
    /// `p(z | D)` for WordTopics, `p(z' | D)` for DocTopics.
    pub dominance: f64,
    /// Top words of a WordTopic, or indicative words of a DocTopic.
    pub keywords: Vec<String>,
    /// DocTopics only: representative documents with their `omega` weight.
    pub top_documents: Vec<(String, f64)>,
}

/// Undirected for Word-Word and Doc-Doc (`src` has the lower index);
/// Word-Doc edges always run from the WordTopic to the DocTopic.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicEdge {
    pub kind: EdgeKind,
    pub src: NodeId,
    pub dst: NodeId,
    pub cooccurrence: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgePrior {
    Fixed(f64),
    /// `1 / (K_w · K_y)`.
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WebOptions {
    pub prior: EdgePrior,
    pub prune_threshold: f64,
    pub keywords: usize,
    pub top_documents: usize,
    pub indicative_words: usize,
    /// Recorded in the graph metadata; defaults to the hash of the model's
    /// checkpoint encoding.
    pub model_hash: Option<String>,
}

impl Default for WebOptions {
    fn default() -> Self {
        Self {
            prior: EdgePrior::Fixed(DEFAULT_PRIOR_EDGE_PROBABILITY),
            prune_threshold: DEFAULT_PRUNE_THRESHOLD,
            keywords: DEFAULT_KEYWORDS,
            top_documents: DEFAULT_TOP_DOCUMENTS,
            indicative_words: DEFAULT_INDICATIVE_WORDS,
            model_hash: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopicWeb {
    pub k_word: usize,
    pub k_doc: usize,
    pub nodes: Vec<TopicNode>,
    pub edges: Vec<TopicEdge>,
    pub prior_edge_probability: f64,
    pub prune_threshold: f64,
    pub model_hash: String,
    pub corpus_hash: String,
}

impl TopicWeb {
    pub fn node(&self, id: NodeId) -> Option<&TopicNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    /// Edges touching `id`, heaviest first.
    pub fn incident_edges(&self, id: NodeId) -> Vec<&TopicEdge> {
        let mut out: Vec<&TopicEdge> = self.edges.iter().filter(|e| e.src == id || e.dst == id).collect();
        out.sort_by(|a, b| b.weight.total_cmp(&a.weight));
        out
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.edges.iter().filter(|e| e.src == id || e.dst == id).count()
    }

    /// Drops edges lighter than `threshold`.
    pub fn pruned(&self, threshold: f64) -> TopicWeb {
        let mut web = self.clone();
        web.edges.retain(|e| e.weight >= threshold);
        web.prune_threshold = threshold.max(self.prune_threshold);
        web
    }
}

/// Ratio of a co-occurrence probability to the random-edge prior.
pub fn edge_weight(cooccurrence: f64, prior: f64) -> f64 {
    cooccurrence / prior
}

/// Three strength matrices turned into a pruned, labelled graph.
pub fn build_topic_web(model: &TrainedModel, corpus: &Corpus, options: &WebOptions) -> Result<TopicWeb> {
    if model.corpus_hash != corpus.content_hash() {
        return Err(Error::Validation("model was trained on a different corpus".into()));
    }
    let params = &model.params;
    let (kw, ky) = (params.k_word(), params.k_doc());
    let prior = match options.prior {
        EdgePrior::Fixed(p) => p,
        EdgePrior::Auto => 1.0 / (kw * ky) as f64,
    };
    if !(prior > 0.0 && prior.is_finite()) {
        return Err(Error::invalid("prior edge probability must be positive"));
    }
    if !(options.prune_threshold >= 0.0) {
        return Err(Error::invalid("prune threshold must be non-negative"));
    }
    let stats = posterior_stats(model)?;
    let ww = word_word_strength(&stats, params)?;
    let dd = doc_doc_strength(&stats, params)?;
    let wd = word_doc_strength(&stats, params)?;

    let vocab = corpus.vocabulary();
    let mut nodes = Vec::with_capacity(kw + ky);
    for k in 0..kw {
        nodes.push(TopicNode {
            id: NodeId::Word(k),
            dominance: stats.p_word_topic[k],
            keywords: top_keywords(params, k, options.keywords)?
                .into_iter()
                .map(|(w, _)| vocab.term(w).to_owned())
                .collect(),
            top_documents: Vec::new(),
        });
    }
    for k in 0..ky {
        nodes.push(TopicNode {
            id: NodeId::Doc(k),
            dominance: stats.p_doc_topic[k],
            keywords: indicative_words(params, corpus, k, options.indicative_words.max(1))?
                .into_iter()
                .take(options.indicative_words)
                .map(|(w, _)| vocab.term(w).to_owned())
                .collect(),
            top_documents: top_documents(params, k, options.top_documents)?
                .into_iter()
                .map(|(d, p)| (corpus.document(d).id.clone(), p))
                .collect(),
        });
    }

    let mut edges = Vec::new();
    let mut push = |kind, src, dst, cooc: f64| {
        let weight = edge_weight(cooc, prior);
        if weight >= options.prune_threshold {
            edges.push(TopicEdge {
                kind,
                src,
                dst,
                cooccurrence: cooc,
                weight,
            });
        }
    };
    upper_pairs(&ww, |a, b, c| {
        push(EdgeKind::WordWord, NodeId::Word(a), NodeId::Word(b), c)
    });
    upper_pairs(&dd, |a, b, c| push(EdgeKind::DocDoc, NodeId::Doc(a), NodeId::Doc(b), c));
    for ((k, kp), &c) in wd.indexed_iter() {
        push(EdgeKind::WordDoc, NodeId::Word(k), NodeId::Doc(kp), c);
    }

    Ok(TopicWeb {
        k_word: kw,
        k_doc: ky,
        nodes,
        edges,
        prior_edge_probability: prior,
        prune_threshold: options.prune_threshold,
        model_hash: options
            .model_hash
            .clone()
            .unwrap_or_else(|| checkpoint_hash(model, None)),
        corpus_hash: model.corpus_hash.clone(),
    })
}

/// Off-diagonal pairs `a < b` of a symmetric matrix.
fn upper_pairs(m: &Array2<f64>, mut f: impl FnMut(usize, usize, f64)) {
    for a in 0..m.nrows() {
        for b in (a + 1)..m.ncols() {
            f(a, b, m[[a, b]]);
        }
    }
}
