//! Shingling/Jaccard near-duplicate baseline for descriptions: a profile is
//! flagged when its description is too similar to any known scam
//! description from training.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::Label;
use crate::real::{real, Real};

/// Default shingle width from the source methodology.
pub const DEFAULT_SHINGLE_K: usize = 5;
/// Decision threshold tuned in the source methodology.
pub const DEFAULT_JACCARD_THRESHOLD: f64 = 0.259;

/// Shingle granularity; characters by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShingleGranularity {
    #[default]
    Character,
    Word,
}

/// The set of all length-k substrings of a normalized text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShingleSet {
    pub shingles: BTreeSet<String>,
    pub k: usize,
}

/// Lowercase and collapse whitespace runs to single spaces.
fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pending_space = false;
    for ch in text.chars() {
        if ch.is_whitespace() {
            pending_space = !out.is_empty();
        } else {
            if pending_space {
                out.push(' ');
                pending_space = false;
            }
            for lc in ch.to_lowercase() {
                out.push(lc);
            }
        }
    }
    out
}

/// Sliding window of width k over the normalized text; set semantics. Text
/// shorter than k yields the empty set.
pub fn shingle(text: &str, k: usize) -> ShingleSet {
    assert!(k >= 1, "shingle width must be at least 1");
    let normalized = normalize(text);
    let chars: Vec<char> = normalized.chars().collect();
    let mut shingles = BTreeSet::new();
    if chars.len() >= k {
        for window in chars.windows(k) {
            shingles.insert(window.iter().collect());
        }
    }
    ShingleSet { shingles, k }
}

/// Word-level variant: windows of k consecutive tokens.
pub fn shingle_words(text: &str, k: usize) -> ShingleSet {
    assert!(k >= 1, "shingle width must be at least 1");
    let normalized = normalize(text);
    let words: Vec<&str> = normalized.split(' ').filter(|w| !w.is_empty()).collect();
    let mut shingles = BTreeSet::new();
    if words.len() >= k {
        for window in words.windows(k) {
            shingles.insert(window.join(" "));
        }
    }
    ShingleSet { shingles, k }
}

pub fn shingle_with(text: &str, k: usize, granularity: ShingleGranularity) -> ShingleSet {
    match granularity {
        ShingleGranularity::Character => shingle(text, k),
        ShingleGranularity::Word => shingle_words(text, k),
    }
}

/// |a n b| / |a u b|; both empty -> 0 by convention.
pub fn jaccard<R: Real>(a: &ShingleSet, b: &ShingleSet) -> Result<R> {
    if a.k != b.k {
        return Err(Error::KMismatch { a: a.k, b: b.k });
    }
    if a.shingles.is_empty() && b.shingles.is_empty() {
        return Ok(R::zero());
    }
    let intersection = a.shingles.intersection(&b.shingles).count();
    let union = a.shingles.len() + b.shingles.len() - intersection;
    Ok(real(intersection as f64 / union as f64))
}

/// Trained state: the shingle sets of the training scam descriptions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimilarityBaseline {
    /// Raw scam descriptions (shingle sets are rebuilt on load).
    pub reference_texts: Vec<String>,
    pub k: usize,
    pub threshold: f64,
    pub granularity: ShingleGranularity,
    #[serde(skip)]
    reference_sets: Vec<ShingleSet>,
}

impl SimilarityBaseline {
    pub fn fit(
        scam_descriptions: Vec<String>,
        k: usize,
        threshold: f64,
        granularity: ShingleGranularity,
    ) -> Self {
        let reference_sets = scam_descriptions
            .iter()
            .map(|t| shingle_with(t, k, granularity))
            .collect();
        Self {
            reference_texts: scam_descriptions,
            k,
            threshold,
            granularity,
            reference_sets,
        }
    }

    /// Rebuild shingle sets after deserialization.
    pub fn rebuild(&mut self) {
        self.reference_sets = self
            .reference_texts
            .iter()
            .map(|t| shingle_with(t, self.k, self.granularity))
            .collect();
    }

    pub fn is_empty(&self) -> bool {
        self.reference_texts.is_empty()
    }

    /// Nearest-neighbor decision: scam iff the max pairwise Jaccard against
    /// the training scam descriptions reaches the threshold.
    pub fn classify(&self, description: &str) -> Result<(Label, f64)> {
        if self.reference_sets.is_empty() {
            return Err(Error::EmptyReference);
        }
        let probe = shingle_with(description, self.k, self.granularity);
        let mut max_sim = 0.0f64;
        for reference in &self.reference_sets {
            let sim: f64 = jaccard(&probe, reference)?;
            if sim > max_sim {
                max_sim = sim;
            }
        }
        let label = if max_sim >= self.threshold {
            Label::Scam
        } else {
            Label::Real
        };
        Ok((label, max_sim))
    }

    /// Total version used by reports: a profile without a description (or an
    /// empty reference set) scores 0 and reads as real.
    pub fn classify_or_default(&self, description: Option<&str>) -> (Label, f64) {
        match description {
            Some(text) if !self.reference_sets.is_empty() => {
                self.classify(text).expect("non-empty references")
            }
            _ => (Label::Real, 0.0),
        }
    }
}
