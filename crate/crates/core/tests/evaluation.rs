mod common;

use topicatlas::evaluation::{
    doc_topic_coherence, heldout_log_likelihood, run_cv, select_topic_number, topic_coherence, DocFrequencyIndex,
};
use topicatlas::inference::{compute_elbo, e_step_document, train, TrainConfig};
use topicatlas::topicweb::indicative_words;

fn config(seed: u64) -> TrainConfig {
    TrainConfig {
        k_word: 3,
        k_doc: 3,
        outer_max_iters: 5,
        seed,
        ..Default::default()
    }
}

#[test]
fn single_topic_bound_is_exact() {
    let (corpus, params) = common::single_topic();
    let (text, links) = common::single_topic_loglik();
    let cfg = TrainConfig::with_topics(1, 1);
    let vars: Vec<_> = corpus
        .documents()
        .iter()
        .map(|d| e_step_document(d, &params, &cfg).unwrap().0)
        .collect();
    let elbo = compute_elbo(&corpus, &params, &vars).unwrap();
    assert!((elbo - (text + links)).abs() < 1e-9, "{elbo} vs {}", text + links);

    let docs: Vec<_> = corpus.documents().iter().collect();
    let s = heldout_log_likelihood(&params, &docs, &cfg).unwrap();
    assert!((s.text_loglik - text).abs() < 1e-9);
    assert!((s.link_loglik - links).abs() < 1e-9);
    assert_eq!(s.n_docs, 2);
}

#[test]
fn cross_validation_is_deterministic() {
    let corpus = common::small_network(0);
    let a = run_cv(&corpus, &config(5), 5).unwrap();
    assert_eq!(a.per_fold.len(), 5);
    for (i, f) in a.per_fold.iter().enumerate() {
        assert_eq!(f.fold, i);
        assert_eq!(f.n_train + f.n_test, corpus.len());
        assert_eq!(f.n_test, 12);
        assert_eq!(f.skipped_links, 0);
        assert!(f.total.is_finite() && f.total < 0.0);
        assert!((f.total - (f.text_loglik + f.link_loglik)).abs() < 1e-9 * f.total.abs());
    }
    let b = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap()
        .install(|| run_cv(&corpus, &config(5), 5).unwrap());
    assert_eq!(a, b);
    assert_ne!(a, run_cv(&corpus, &config(6), 5).unwrap());
}

#[test]
fn trained_model_beats_its_initialization_on_held_out_text() {
    let corpus = common::small_network(1);
    let docs: Vec<_> = corpus.documents().iter().take(10).collect();
    let cfg = TrainConfig {
        outer_max_iters: 30,
        ..config(2)
    };
    let fitted = train(&corpus, &cfg).unwrap();
    let start = topicatlas::inference::init_model(30, corpus.len(), &cfg).unwrap();
    let good = heldout_log_likelihood(&fitted.params, &docs, &cfg).unwrap();
    let bad = heldout_log_likelihood(&start, &docs, &cfg).unwrap();
    assert!(good.total() > bad.total());
}

#[test]
fn doc_topic_coherence_scores_indicative_words() {
    let corpus = common::small_network(2);
    let model = train(&corpus, &config(0)).unwrap();
    let index = DocFrequencyIndex::new(&corpus);
    for k in 0..3 {
        let words: Vec<usize> = indicative_words(&model.params, &corpus, k, 10)
            .unwrap()
            .into_iter()
            .map(|(w, _)| w)
            .collect();
        let direct = topic_coherence(&index, &words).unwrap();
        assert_eq!(
            doc_topic_coherence(&model.params, &corpus, &index, k, 10).unwrap(),
            direct
        );
    }
}

#[test]
fn selection_reports_every_candidate() {
    let corpus = common::small_network(3);
    let sel = select_topic_number(&corpus, &[2, 3], &config(0), 10).unwrap();
    assert_eq!(sel.scores.iter().map(|s| s.0).collect::<Vec<_>>(), vec![2, 3]);
    assert!(sel.scores.iter().all(|s| s.1.is_some()));
    assert!(sel.best == 2 || sel.best == 3);
    assert!(select_topic_number(&corpus, &[], &config(0), 10).is_err());
}
