//! Term vocabulary with document frequencies.
//!
//! Indices are dense in first-seen order. Once frozen, a vocabulary rejects
//! new terms: out-of-vocabulary terms are dropped at transform time.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Vocabulary {
    term_to_index: BTreeMap<String, u32>,
    /// Document frequency per index.
    df: Vec<u32>,
    /// Index -> term.
    terms: Vec<String>,
    n_docs: u32,
    frozen: bool,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_docs(&self) -> u32 {
        self.n_docs
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    pub fn index_of(&self, term: &str) -> Option<u32> {
        self.term_to_index.get(term).copied()
    }

    pub fn term(&self, index: u32) -> &str {
        &self.terms[index as usize]
    }

    pub fn df(&self, index: u32) -> u32 {
        self.df[index as usize]
    }

    /// Count one document's term occurrences into the vocabulary, growing it
    /// with unseen terms. Returns sparse (index, count) sorted by index.
    pub fn add_document<'a, I>(&mut self, terms: I) -> Vec<(u32, u32)>
    where
        I: IntoIterator<Item = &'a str>,
    {
        assert!(!self.frozen, "cannot add documents to a frozen vocabulary");
        let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
        for term in terms {
            let next = self.terms.len() as u32;
            let index = *self.term_to_index.entry(term.to_string()).or_insert(next);
            if index == next {
                self.terms.push(term.to_string());
                self.df.push(0);
            }
            *counts.entry(index).or_insert(0) += 1;
        }
        for &index in counts.keys() {
            self.df[index as usize] += 1;
        }
        self.n_docs += 1;
        counts.into_iter().collect()
    }

    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    /// Term counts for a document against the (frozen or not) vocabulary;
    /// unknown terms are dropped.
    pub fn transform<'a, I>(&self, terms: I) -> Vec<(u32, u32)>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
        for term in terms {
            if let Some(&index) = self.term_to_index.get(term) {
                *counts.entry(index).or_insert(0) += 1;
            }
        }
        counts.into_iter().collect()
    }

    /// Persist as TSV: one `term\tindex\tdf` line per term, sorted by term,
    /// preceded by a header comment carrying the corpus size.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("# docs={}\tfrozen={}\n", self.n_docs, self.frozen as u8);
        for (term, &index) in &self.term_to_index {
            out.push_str(term);
            out.push('\t');
            out.push_str(&index.to_string());
            out.push('\t');
            out.push_str(&self.df[index as usize].to_string());
            out.push('\n');
        }
        out
    }

    pub fn save_tsv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_tsv()).map_err(|e| Error::io(path, e))
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut vocab = Vocabulary::new();
        let mut max_index: i64 = -1;
        let mut rows: Vec<(String, u32, u32)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('#') {
                for part in header.split_whitespace() {
                    if let Some(v) = part.strip_prefix("docs=") {
                        vocab.n_docs = v
                            .parse()
                            .map_err(|_| Error::Bundle(format!("bad vocabulary header: {line}")))?;
                    } else if let Some(v) = part.strip_prefix("frozen=") {
                        vocab.frozen = v == "1";
                    }
                }
                continue;
            }
            let mut cols = line.split('\t');
            let (term, index, df) = match (cols.next(), cols.next(), cols.next()) {
                (Some(t), Some(i), Some(d)) => (
                    t.to_string(),
                    i.parse::<u32>().map_err(|_| {
                        Error::Bundle(format!("vocabulary line {}: bad index", lineno + 1))
                    })?,
                    d.parse::<u32>().map_err(|_| {
                        Error::Bundle(format!("vocabulary line {}: bad df", lineno + 1))
                    })?,
                ),
                _ => {
                    return Err(Error::Bundle(format!(
                        "vocabulary line {}: expected term\\tindex\\tdf",
                        lineno + 1
                    )))
                }
            };
            max_index = max_index.max(index as i64);
            rows.push((term, index, df));
        }
        let size = (max_index + 1) as usize;
        if rows.len() != size {
            return Err(Error::Bundle(format!(
                "vocabulary indices are not dense: {} terms, max index {}",
                rows.len(),
                max_index
            )));
        }
        vocab.terms = vec![String::new(); size];
        vocab.df = vec![0; size];
        for (term, index, df) in rows {
            vocab.terms[index as usize] = term.clone();
            vocab.df[index as usize] = df;
            vocab.term_to_index.insert(term, index);
        }
        Ok(vocab)
    }

    pub fn load_tsv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_tsv(&text)
    }
}

/// Consecutive token pairs as space-joined bigram terms.
pub fn bigrams(tokens: &[String]) -> Vec<String> {
    tokens
        .windows(2)
        .map(|w| format!("{} {}", w[0], w[1]))
        .collect()
}
