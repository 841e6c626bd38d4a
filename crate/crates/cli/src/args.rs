use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use topicatlas::corpus::Tokenizer;
use topicatlas::inference::TrainConfig;
use topicatlas::topicweb::EdgePrior;

#[derive(Debug, Parser)]
#[command(
    name = "topicatlas",
    version,
    about = "Joint word/link topic models for text networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model and write a checkpoint, ELBO trace and indexed corpus.
    Train(TrainArgs),
    /// Build the topic web of a checkpoint and write it as graph JSON.
    ExportWeb(ExportArgs),
    /// Cross-validated held-out likelihood and topic coherence reports.
    Evaluate(EvaluateArgs),
    /// Serve a graph file (and optionally document details) over HTTP.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelFlags {
    /// Number of WordTopics.
    #[arg(long, default_value_t = 70)]
    pub kw: usize,
    /// Number of DocTopics.
    #[arg(long, default_value_t = 70)]
    pub ky: usize,
    /// Initial Dirichlet prior, per component.
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub inner_tol: f64,
    #[arg(long, default_value_t = 100)]
    pub inner_iters: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub outer_tol: f64,
    #[arg(long, default_value_t = 50)]
    pub outer_iters: usize,
    /// Pseudo-count added to every M-step cell.
    #[arg(long, default_value_t = 1e-10)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep alpha at its initial value.
    #[arg(long)]
    pub freeze_alpha: bool,
}

impl ModelFlags {
    pub fn config(&self) -> TrainConfig {
        TrainConfig {
            k_word: self.kw,
            k_doc: self.ky,
            alpha_init: self.alpha,
            inner_tol: self.inner_tol,
            inner_max_iters: self.inner_iters,
            outer_tol: self.outer_tol,
            outer_max_iters: self.outer_iters,
            smoothing_eps: self.eps,
            seed: self.seed,
            update_alpha: !self.freeze_alpha,
            use_links: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TokenizerArg {
    Whitespace,
    Simple,
}

impl From<TokenizerArg> for Tokenizer {
    fn from(t: TokenizerArg) -> Self {
        match t {
            TokenizerArg::Whitespace => Tokenizer::Whitespace,
            TokenizerArg::Simple => Tokenizer::Simple,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CorpusFlags {
    /// Drop terms occurring fewer times than this.
    #[arg(long, default_value_t = 5)]
    pub min_count: usize,
    /// Drop documents with fewer link tokens than this (applied until stable).
    #[arg(long, default_value_t = 0)]
    pub min_links: usize,
    /// File with one stopword per line.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// How string-valued text fields are split into terms.
    #[arg(long, value_enum, default_value_t = TokenizerArg::Whitespace)]
    pub tokenizer: TokenizerArg,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Line-delimited JSON records: {"id", "text", "links"}.
    pub corpus: PathBuf,
    /// Output directory.
    #[arg(long, short)]
    pub out: PathBuf,
    #[command(flatten)]
    pub model: ModelFlags,
    #[command(flatten)]
    pub corpus_flags: CorpusFlags,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Checkpoint written by `train`.
    #[arg(long)]
    pub model: PathBuf,
    /// The corpus the model was trained on: the `corpus.dump` written by
    /// `train`, or the original records.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Output directory.
    #[arg(long, short)]
    pub out: PathBuf,
    /// Random-edge probability, or `auto` for 1/(kw·ky).
    #[arg(long, default_value = "0.0002", value_parser = parse_prior)]
    pub prior: EdgePrior,
    /// Drop edges whose weight is below this.
    #[arg(long, default_value_t = 1.0)]
    pub threshold: f64,
    /// Re-apply this link filter when `--corpus` points at raw records.
    #[arg(long, default_value_t = 0)]
    pub min_links: usize,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    pub corpus: PathBuf,
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    /// Top words scored per topic.
    #[arg(long, default_value_t = 10)]
    pub top_words: usize,
    #[command(flatten)]
    pub model: ModelFlags,
    #[command(flatten)]
    pub corpus_flags: CorpusFlags,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Graph JSON written by `export-web`.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    /// Checkpoint, needed for `/api/doc/{id}`.
    #[arg(long, requires = "corpus")]
    pub model: Option<PathBuf>,
    /// Corpus matching `--model`.
    #[arg(long, requires = "model")]
    pub corpus: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub min_links: usize,
    /// Directory holding the built UI bundle.
    #[arg(long)]
    pub ui: Option<PathBuf>,
}

pub fn parse_prior(s: &str) -> Result<EdgePrior, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(EdgePrior::Auto);
    }
    match s.parse::<f64>() {
        Ok(p) if p > 0.0 && p.is_finite() => Ok(EdgePrior::Fixed(p)),
        _ => Err(format!("expected a positive number or `auto`, got {s:?}")),
    }
}
