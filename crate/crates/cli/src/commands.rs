use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use log::{info, warn};
use topicatlas::corpus::write_dump;
use topicatlas::evaluation::{
    doc_topic_coherence_report, run_cv, word_topic_coherence, write_coherence_csv, write_heldout_csv,
    DocFrequencyIndex, EvaluationSummary,
};
use topicatlas::inference::{save_checkpoint, train};
use topicatlas::parallel::configure_threads_from_env;
use topicatlas::topicweb::{build_topic_web, export_graph, EdgePrior, WebOptions};

use crate::args::{EvaluateArgs, ExportArgs, TrainArgs};
use crate::load::{hex_sha256, ingest_options, load_corpus, load_matching_corpus, load_model};
use crate::manifest::ManifestBuilder;

pub const MODEL_FILE: &str = "model.json";
pub const ELBO_FILE: &str = "elbo.csv";
pub const DUMP_FILE: &str = "corpus.dump";
pub const GRAPH_FILE: &str = "graph.json";
pub const HELDOUT_FILE: &str = "heldout.csv";
pub const WORD_COHERENCE_FILE: &str = "coherence_word.csv";
pub const DOC_COHERENCE_FILE: &str = "coherence_doc.csv";
pub const SUMMARY_FILE: &str = "summary.json";

fn create_dir(dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

pub fn cmd_train(args: &TrainArgs) -> anyhow::Result<()> {
    let threads = configure_threads_from_env();
    let mut manifest = ManifestBuilder::new("train", threads);
    let config = args.model.config();
    config.validate()?;
    let options = ingest_options(&args.corpus_flags)?;
    let loaded = load_corpus(&args.corpus, &options, args.corpus_flags.min_links)?;
    let corpus = &loaded.corpus;

    let model = train(corpus, &config)?;
    info!(
        "trained {} iterations, final ELBO {:.6}, converged: {}",
        model.elbo_trace.len(),
        model.elbo_trace.last().copied().unwrap_or(f64::NAN),
        model.converged
    );

    create_dir(&args.out)?;
    let mut bytes = Vec::new();
    save_checkpoint(&model, Some(&options), &mut bytes)?;
    let model_path = args.out.join(MODEL_FILE);
    fs::write(&model_path, &bytes).with_context(|| format!("writing {}", model_path.display()))?;

    let elbo_path = args.out.join(ELBO_FILE);
    let mut w = csv::Writer::from_writer(create(&elbo_path)?);
    w.write_record(["iteration", "elbo"])?;
    for (i, e) in model.elbo_trace.iter().enumerate() {
        w.write_record([(i + 1).to_string(), e.to_string()])?;
    }
    w.flush()?;

    let dump_path = args.out.join(DUMP_FILE);
    let mut out = create(&dump_path)?;
    write_dump(corpus, &mut out)?;
    out.flush()?;

    manifest.input("corpus", &args.corpus);
    manifest.output("model", &model_path);
    manifest.output("elbo", &elbo_path);
    manifest.output("corpus_dump", &dump_path);
    manifest.setting("min_links", args.corpus_flags.min_links);
    manifest.setting("converged", model.converged);
    manifest.setting("alpha_warning", model.alpha_warning);
    let m = manifest.m();
    m.config = Some(config.clone());
    m.ingest = Some(options);
    m.corpus_hash = Some(model.corpus_hash.clone());
    m.model_hash = Some(hex_sha256(&bytes));
    m.seed = Some(config.seed);
    manifest.finish(&args.out)?;
    Ok(())
}

pub fn cmd_export_web(args: &ExportArgs) -> anyhow::Result<()> {
    let threads = configure_threads_from_env();
    let mut manifest = ManifestBuilder::new("export-web", threads);
    let model = load_model(&args.model)?;
    let loaded = load_matching_corpus(&model, &args.corpus, args.min_links)?;
    let options = WebOptions {
        prior: args.prior,
        prune_threshold: args.threshold,
        model_hash: Some(model.hash.clone()),
        ..Default::default()
    };
    let web = build_topic_web(&model.model, &loaded.corpus, &options)?;
    info!("topic web: {} nodes, {} edges", web.nodes.len(), web.edges.len());

    create_dir(&args.out)?;
    let graph_path = args.out.join(GRAPH_FILE);
    let mut out = create(&graph_path)?;
    export_graph(&web, &mut out)?;
    out.flush()?;

    manifest.input("model", &args.model);
    manifest.input("corpus", &args.corpus);
    manifest.output("graph", &graph_path);
    manifest.setting(
        "prior",
        match args.prior {
            EdgePrior::Fixed(p) => serde_json::json!(p),
            EdgePrior::Auto => serde_json::json!("auto"),
        },
    );
    manifest.setting("prior_resolved", web.prior_edge_probability);
    manifest.setting("threshold", args.threshold);
    manifest.setting("min_links", args.min_links);
    manifest.setting("edges", web.edges.len());
    let m = manifest.m();
    m.config = Some(model.model.config.clone());
    m.ingest = model.ingest.clone();
    m.corpus_hash = Some(model.model.corpus_hash.clone());
    m.model_hash = Some(model.hash.clone());
    m.seed = Some(model.model.config.seed);
    manifest.finish(&args.out)?;
    Ok(())
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> anyhow::Result<()> {
    let threads = configure_threads_from_env();
    let mut manifest = ManifestBuilder::new("evaluate", threads);
    let config = args.model.config();
    config.validate()?;
    let options = ingest_options(&args.corpus_flags)?;
    let min_links = args.corpus_flags.min_links;
    let loaded = load_corpus(&args.corpus, &options, min_links)?;
    let corpus = &loaded.corpus;

    let heldout = run_cv(corpus, &config, args.folds)?;
    info!("mean held-out log likelihood {:.4}", heldout.mean_total);

    let full = train(corpus, &config)?;
    let index = DocFrequencyIndex::new(corpus);
    let word_coherence = word_topic_coherence(&full.params, &index, args.top_words)?;
    let doc_coherence = if corpus.total_links() == 0 {
        warn!("corpus has no links; skipping DocTopic coherence");
        None
    } else {
        Some(doc_topic_coherence_report(
            &full.params,
            corpus,
            &index,
            args.top_words,
        )?)
    };

    create_dir(&args.out)?;
    let heldout_path = args.out.join(HELDOUT_FILE);
    write_heldout_csv(&heldout, create(&heldout_path)?)?;
    let word_path = args.out.join(WORD_COHERENCE_FILE);
    write_coherence_csv(&word_coherence, "w", create(&word_path)?)?;
    manifest.output("heldout", &heldout_path);
    manifest.output("word_coherence", &word_path);
    if let Some(report) = &doc_coherence {
        let doc_path = args.out.join(DOC_COHERENCE_FILE);
        write_coherence_csv(report, "d", create(&doc_path)?)?;
        manifest.output("doc_coherence", &doc_path);
    }
    let summary = EvaluationSummary {
        n_documents: corpus.len(),
        min_links,
        heldout,
        word_coherence,
        doc_coherence,
    };
    let summary_path = args.out.join(SUMMARY_FILE);
    let mut bytes = serde_json::to_vec_pretty(&summary)?;
    bytes.push(b'\n');
    fs::write(&summary_path, bytes).with_context(|| format!("writing {}", summary_path.display()))?;
    manifest.output("summary", &summary_path);

    manifest.input("corpus", &args.corpus);
    manifest.setting("folds", args.folds);
    manifest.setting("min_links", min_links);
    manifest.setting("top_words", args.top_words);
    let m = manifest.m();
    m.config = Some(config.clone());
    m.ingest = Some(options);
    m.corpus_hash = Some(corpus.content_hash());
    m.seed = Some(config.seed);
    manifest.finish(&args.out)?;
    Ok(())
}
