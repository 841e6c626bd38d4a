mod common;

use topicatlas::corpus::Corpus;
use topicatlas::inference::{train, TrainConfig, TrainedModel};
use topicatlas::topicweb::{
    build_topic_web, export_graph, parse_graph, EdgeKind, EdgePrior, GraphDocument, NodeId, TopicWeb, WebOptions,
};

fn fitted(kw: usize, ky: usize) -> (Corpus, TrainedModel) {
    let corpus = common::small_network(7);
    let cfg = TrainConfig {
        k_word: kw,
        k_doc: ky,
        outer_max_iters: 6,
        seed: 3,
        ..Default::default()
    };
    let model = train(&corpus, &cfg).unwrap();
    (corpus, model)
}

fn web(model: &TrainedModel, corpus: &Corpus, threshold: f64) -> TopicWeb {
    let options = WebOptions {
        prune_threshold: threshold,
        ..Default::default()
    };
    build_topic_web(model, corpus, &options).unwrap()
}

#[test]
fn unpruned_web_has_every_pair() {
    let (corpus, model) = fitted(4, 3);
    let w = web(&model, &corpus, 0.0);
    assert_eq!(w.nodes.len(), 7);
    let count = |kind| w.edges.iter().filter(|e| e.kind == kind).count();
    assert_eq!(count(EdgeKind::WordWord), 6);
    assert_eq!(count(EdgeKind::DocDoc), 3);
    assert_eq!(count(EdgeKind::WordDoc), 12);
    assert!(w.edges.iter().all(|e| e.src != e.dst));
}

#[test]
fn dominance_sums_to_one_per_kind() {
    let (corpus, model) = fitted(4, 3);
    let w = web(&model, &corpus, 0.0);
    let word: f64 = w.nodes.iter().filter(|n| n.id.is_word()).map(|n| n.dominance).sum();
    let doc: f64 = w.nodes.iter().filter(|n| !n.id.is_word()).map(|n| n.dominance).sum();
    assert!((word - 1.0).abs() < 1e-9);
    assert!((doc - 1.0).abs() < 1e-9);
}

#[test]
fn pruning_is_monotone_and_matches_rebuild() {
    let (corpus, model) = fitted(4, 3);
    let full = web(&model, &corpus, 0.0);
    let mut weights: Vec<f64> = full.edges.iter().map(|e| e.weight).collect();
    weights.sort_by(f64::total_cmp);
    let mut previous = full.edges.len();
    for &t in &weights {
        let rebuilt = web(&model, &corpus, t);
        assert_eq!(rebuilt, full.pruned(t));
        assert!(rebuilt.edges.len() <= previous);
        // the edge sitting exactly at the threshold survives
        assert!(rebuilt.edges.iter().any(|e| e.weight == t));
        previous = rebuilt.edges.len();
    }
}

#[test]
fn degrees_agree_with_edge_list() {
    let (corpus, model) = fitted(4, 3);
    let w = web(&model, &corpus, 1.0);
    let mut ends = 0;
    for node in &w.nodes {
        let incident = w.incident_edges(node.id);
        assert_eq!(incident.len(), w.degree(node.id));
        assert!(incident.windows(2).all(|p| p[0].weight >= p[1].weight));
        ends += incident.len();
    }
    assert_eq!(ends, 2 * w.edges.len());
}

#[test]
fn labels_have_requested_sizes() {
    let (corpus, model) = fitted(3, 3);
    let w = web(&model, &corpus, 1.0);
    for node in &w.nodes {
        assert_eq!(node.keywords.len(), 10);
        match node.id {
            NodeId::Word(_) => assert!(node.top_documents.is_empty()),
            NodeId::Doc(_) => assert_eq!(node.top_documents.len(), 5),
        }
    }
}

#[test]
fn export_is_reproducible_and_valid() {
    let (corpus, model) = fitted(3, 3);
    let mut a = Vec::new();
    export_graph(&web(&model, &corpus, 1.0), &mut a).unwrap();
    let mut b = Vec::new();
    export_graph(&web(&model, &corpus, 1.0), &mut b).unwrap();
    assert_eq!(a, b);
    let doc = parse_graph(&a).unwrap();
    assert_eq!(doc.to_bytes(), a);
    assert_eq!(doc, GraphDocument::from_web(&web(&model, &corpus, 1.0)));
    assert_eq!(doc.meta.prior, 0.0002);
}

#[test]
fn auto_prior_is_uniform_over_pairs() {
    let (corpus, model) = fitted(4, 3);
    let options = WebOptions {
        prior: EdgePrior::Auto,
        ..Default::default()
    };
    let w = build_topic_web(&model, &corpus, &options).unwrap();
    assert_eq!(w.prior_edge_probability, 1.0 / 12.0);
}

#[test]
fn refuses_a_foreign_corpus() {
    let (_, model) = fitted(3, 3);
    let other = common::small_network(8);
    assert!(build_topic_web(&model, &other, &WebOptions::default()).is_err());
}
