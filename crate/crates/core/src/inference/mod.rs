//! Variational EM for the joint word/link topic model.
//!
//! Each document `i` has WordTopic proportions `θ_i ~ Dir(α)`. Words are
//! drawn through a WordTopic and its `beta` row. Each link first draws a
//! transition WordTopic from `θ_i`, moves to a DocTopic through `eta`, and
//! draws its target document from that DocTopic's `omega` row.
//!
//! The variational posterior is fully factorized: a Dirichlet `γ_i` over
//! `θ_i`, and one categorical row per token (`phi` for words; `lambda` for
//! transition topics and `sigma` for DocTopics of links). All responsibility
//! updates run in log space with max-subtraction.

mod alpha;
mod checkpoint;
mod config;
mod elbo;
mod estep;
mod generate;
mod mstep;
mod params;
mod train;

pub use alpha::{alpha_objective, update_alpha, AlphaUpdate};
pub use checkpoint::{checkpoint_hash, load_checkpoint, save_checkpoint, Dims, CHECKPOINT_FORMAT, CHECKPOINT_VERSION};
pub use config::TrainConfig;
pub use elbo::{compute_elbo, ElboTerms};
pub use estep::{
    e_step_document, lambda_update, phi_update, recompute_gamma, sigma_update, DocInference, DocVariational,
    EStepContext, WarmStart,
};
pub use generate::{generate_corpus, sample_params};
pub use mstep::{m_step, SuffStats};
pub use params::{init_model, ModelParams};
pub use train::{train, train_observed, DocSummary, TrainObserver, TrainedModel, TrainingSet};
