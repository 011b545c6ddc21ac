//! Tokenization for profile descriptions and image captions.

pub mod stem;

use serde::{Deserialize, Serialize};

pub use stem::stem;

/// Synthetic start-of-text token prepended to every description.
pub const START_TOKEN: &str = "<start>";

/// Description tokenizer settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct TokenizerConfig {
    /// Split on apostrophes ("don't" -> "don", "t"). Default true.
    pub split_apostrophes: bool,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self {
            split_apostrophes: true,
        }
    }
}

/// Tokenize a description: a start token, then lowercased maximal runs of
/// letters/digits (plus apostrophes when configured). Punctuation splits
/// tokens; no stemming and no stop-word removal.
pub fn tokenize_description(text: &str, cfg: &TokenizerConfig) -> Vec<String> {
    let mut tokens = vec![START_TOKEN.to_string()];
    let mut current = String::new();
    for ch in text.chars() {
        let is_apostrophe = ch == '\'' || ch == '\u{2019}';
        if ch.is_alphanumeric() || (is_apostrophe && !cfg.split_apostrophes) {
            if is_apostrophe {
                current.push('\'');
            } else {
                for lc in ch.to_lowercase() {
                    current.push(lc);
                }
            }
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Tokenize a caption: lowercased maximal runs of ASCII letters. Digits and
/// punctuation split tokens.
pub fn tokenize_caption(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars() {
        if ch.is_alphabetic() {
            for lc in ch.to_lowercase() {
                current.push(lc);
            }
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}
