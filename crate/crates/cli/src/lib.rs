//! Command-line front end: `train`, `export-web`, `evaluate` and `serve`.

pub mod args;
pub mod commands;
pub mod load;
pub mod manifest;
pub mod serve;

use anyhow::Context;
use log::info;

use args::{Cli, Command, ServeArgs};

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Train(a) => commands::cmd_train(&a),
        Command::ExportWeb(a) => commands::cmd_export_web(&a),
        Command::Evaluate(a) => commands::cmd_evaluate(&a),
        Command::Serve(a) => cmd_serve(&a),
    }
}

/// Loads everything up front, then serves until interrupted. Writes nothing.
pub fn cmd_serve(args: &ServeArgs) -> anyhow::Result<()> {
    topicatlas::parallel::configure_threads_from_env();
    let bytes = std::fs::read(&args.graph).with_context(|| format!("reading {}", args.graph.display()))?;
    let mut state = serve::ServeState::new(bytes)?;
    if let (Some(model_path), Some(corpus_path)) = (&args.model, &args.corpus) {
        let model = load::load_model(model_path)?;
        let corpus = load::load_matching_corpus(&model, corpus_path, args.min_links)?;
        state = state.with_documents(&model, &corpus);
    }
    if let Some(dir) = &args.ui {
        state = state.with_ui(dir.clone());
    }
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind((args.host.as_str(), args.port))
            .await
            .with_context(|| format!("binding {}:{}", args.host, args.port))?;
        info!("serving on http://{}", listener.local_addr()?);
        serve::serve(state, listener).await?;
        Ok(())
    })
}
