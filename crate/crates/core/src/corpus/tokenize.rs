use serde::{Deserialize, Serialize};

/// How a string-valued `text` field is split into terms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tokenizer {
    /// The text is already tokenized; split on whitespace only.
    #[default]
    Whitespace,
    /// Lowercase, then split on anything that is not alphanumeric.
    Simple,
}

impl Tokenizer {
    pub fn tokenize(self, text: &str) -> Vec<String> {
        match self {
            Tokenizer::Whitespace => text.split_whitespace().map(str::to_owned).collect(),
            Tokenizer::Simple => simple_tokenize(text),
        }
    }
}

pub fn simple_tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect()
}
