//! Caption section encoding: closed-class words are removed, the remaining
//! tokens are stemmed, and the union over all of a profile's captions is
//! encoded as binary presence features.
//!
//! Generated captions follow a fixed template, so a closed-class stoplist
//! leaves just the entities, actions and modifiers.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;
use crate::text::{stem, tokenize_caption};

use super::vocab::Vocabulary;
use super::{FeatureVector, Section};

/// Stoplist bundled with the crate: one word per line, '#' comments.
pub const DEFAULT_STOPLIST: &str = include_str!("../../assets/stoplist.txt");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaptionEncoder {
    stoplist: BTreeSet<String>,
    pub vocab: Vocabulary,
}

pub fn parse_stoplist(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_lowercase())
        .collect()
}

pub fn load_stoplist(path: impl AsRef<Path>) -> Result<BTreeSet<String>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_stoplist(&text))
}

impl CaptionEncoder {
    pub fn new(stoplist: BTreeSet<String>) -> Self {
        Self {
            stoplist,
            vocab: Vocabulary::new(),
        }
    }

    pub fn with_default_stoplist() -> Self {
        Self::new(parse_stoplist(DEFAULT_STOPLIST))
    }

    /// Distinct stemmed open-class tokens across a profile's captions,
    /// sorted. Invariant to caption order and duplication.
    pub fn caption_terms(&self, captions: &[String]) -> BTreeSet<String> {
        let mut terms = BTreeSet::new();
        for caption in captions {
            for token in tokenize_caption(caption) {
                if self.stoplist.contains(&token) {
                    continue;
                }
                terms.insert(stem(&token));
            }
        }
        terms
    }

    /// Grow the vocabulary with one profile's caption terms.
    pub fn fit_document(&mut self, captions: &[String]) {
        if captions.is_empty() {
            return;
        }
        let terms = self.caption_terms(captions);
        self.vocab
            .add_document(terms.iter().map(|s| s.as_str()));
    }

    pub fn freeze(&mut self) {
        self.vocab.freeze();
    }

    /// Binary presence vector over the caption vocabulary. `present` is
    /// false iff the profile has no captions.
    pub fn encode<R: Real>(&self, captions: &[String]) -> FeatureVector<R> {
        if captions.is_empty() {
            return FeatureVector::absent(Section::Captions);
        }
        let terms = self.caption_terms(captions);
        let entries = self
            .vocab
            .transform(terms.iter().map(|s| s.as_str()))
            .into_iter()
            .map(|(i, _)| (i, R::one()))
            .collect();
        FeatureVector {
            section: Section::Captions,
            entries,
            missing: BTreeSet::new(),
            present: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.vocab.len()
    }
}
