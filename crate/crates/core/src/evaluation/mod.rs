//! Model assessment: topic coherence, coherence-driven choice of the topic
//! number, and k-fold held-out log likelihood.

mod coherence;
mod cv;
mod heldout;
mod report;
mod select;

pub use coherence::{
    doc_topic_coherence, doc_topic_coherence_report, topic_coherence, word_topic_coherence, CoherenceReport,
    DocFrequencyIndex, DEFAULT_COHERENCE_WORDS,
};
pub use cv::{run_cv, FoldScore, HeldoutReport};
pub use heldout::{heldout_log_likelihood, HeldoutScore};
pub use report::{write_coherence_csv, write_heldout_csv, EvaluationSummary};
pub use select::{select_topic_number, TopicSelection};
