//! Occupation normalization into ~45 category areas.
//!
//! The lexicon ships as an editable JSON config mapping category ->
//! patterns. Lookup is case-insensitive and punctuation-stripped; a pattern
//! matches on equality, or on substring containment when it is at least four
//! characters long (so short aliases like "it" cannot fire inside unrelated
//! words). The longest matching pattern wins; unmatched strings fall back to
//! "other".

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Category list bundled with the crate.
pub const DEFAULT_LEXICON_JSON: &str = include_str!("../../assets/occupations.json");

pub const FALLBACK_CATEGORY: &str = "other";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OccupationLexicon {
    /// Sorted category names, always containing the fallback.
    categories: Vec<String>,
    /// (normalized pattern, category index), longest pattern first.
    patterns: Vec<(String, usize)>,
}

fn normalize(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    for ch in raw.chars() {
        if ch.is_alphanumeric() {
            for lc in ch.to_lowercase() {
                out.push(lc);
            }
        } else if !out.ends_with(' ') {
            out.push(' ');
        }
    }
    out.trim().to_string()
}

impl OccupationLexicon {
    /// Built-in lexicon seeded with the category areas named in the source
    /// data description.
    pub fn default_lexicon() -> Self {
        Self::from_json(DEFAULT_LEXICON_JSON).expect("bundled lexicon parses")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: BTreeMap<String, Vec<String>> = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("occupation lexicon: {e}")))?;
        let mut categories: Vec<String> = raw.keys().cloned().collect();
        if !categories.iter().any(|c| c == FALLBACK_CATEGORY) {
            categories.push(FALLBACK_CATEGORY.to_string());
        }
        categories.sort();
        let index_of = |name: &str| categories.iter().position(|c| c == name).unwrap();

        let mut patterns: Vec<(String, usize)> = Vec::new();
        for (category, pats) in &raw {
            let idx = index_of(category);
            for pat in pats {
                let norm = normalize(pat);
                if !norm.is_empty() {
                    patterns.push((norm, idx));
                }
            }
        }
        // longest first so specific aliases beat generic substrings
        patterns.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(&b.0)));
        patterns.dedup_by(|a, b| a.0 == b.0);
        Ok(Self {
            categories,
            patterns,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn category_index(&self, category: &str) -> Option<usize> {
        self.categories.iter().position(|c| c == category)
    }

    /// Map a raw occupation string to exactly one category.
    pub fn normalize_occupation(&self, raw: &str) -> &str {
        let norm = normalize(raw);
        if norm.is_empty() {
            return FALLBACK_CATEGORY;
        }
        for (pattern, idx) in &self.patterns {
            let matched = norm == *pattern || (pattern.len() >= 4 && norm.contains(pattern));
            if matched {
                return &self.categories[*idx];
            }
        }
        FALLBACK_CATEGORY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn has_forty_five_categories() {
        let lex = OccupationLexicon::default_lexicon();
        assert_eq!(lex.categories().len(), 45);
        assert!(lex.category_index(FALLBACK_CATEGORY).is_some());
    }

    #[test]
    fn named_mappings() {
        let lex = OccupationLexicon::default_lexicon();
        assert_eq!(lex.normalize_occupation("businessman"), "business");
        assert_eq!(lex.normalize_occupation("doctor"), "medical");
        assert_eq!(lex.normalize_occupation("attorney"), "legal");
        assert_eq!(lex.normalize_occupation("studant"), "student");
        assert_eq!(lex.normalize_occupation("Solicitor"), "legal");
        assert_eq!(lex.normalize_occupation("U.S. Army"), "military");
        assert_eq!(lex.normalize_occupation("Self-Employed"), "self");
        assert_eq!(lex.normalize_occupation("nurse"), "medical");
        assert_eq!(lex.normalize_occupation("IT"), "tech");
    }

    #[test]
    fn unmatched_falls_back_to_other() {
        let lex = OccupationLexicon::default_lexicon();
        assert_eq!(lex.normalize_occupation("zzqy-unknown-job"), "other");
        assert_eq!(lex.normalize_occupation("   "), "other");
    }

    #[test]
    fn lookup_is_case_insensitive_and_punctuation_stripped() {
        let lex = OccupationLexicon::default_lexicon();
        assert_eq!(
            lex.normalize_occupation("RETIRED."),
            lex.normalize_occupation("retired")
        );
    }

    #[test]
    fn short_aliases_do_not_fire_inside_words() {
        let lex = OccupationLexicon::default_lexicon();
        // "waiter" contains "it" but must not map to tech
        assert_eq!(lex.normalize_occupation("waiter"), "catering");
    }
}
