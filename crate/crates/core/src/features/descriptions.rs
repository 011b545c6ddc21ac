//! Description section encoding: word-bigram term frequencies weighted by
//! TF-IDF and L2-normalized. Tokens keep their original form; stemming and
//! stop-word removal are deliberately not applied here.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::real::{real_usize, Real};
use crate::text::{tokenize_description, TokenizerConfig};

use super::tfidf::{apply_tfidf, fit_tfidf, IdfTable, IdfVariant};
use super::vocab::{bigrams, Vocabulary};
use super::{FeatureVector, Section};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DescriptionEncoder {
    pub tokenizer: TokenizerConfig,
    pub vocab: Vocabulary,
    idf: Option<IdfTableStorage>,
}

/// IDF weights are stored as f64 and converted on use so the encoder stays
/// scalar-agnostic in serialized form.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct IdfTableStorage {
    weights: Vec<f64>,
    variant: IdfVariant,
}

impl DescriptionEncoder {
    pub fn new(tokenizer: TokenizerConfig) -> Self {
        Self {
            tokenizer,
            vocab: Vocabulary::new(),
            idf: None,
        }
    }

    pub fn tokenize(&self, text: &str) -> Vec<String> {
        tokenize_description(text, &self.tokenizer)
    }

    /// Grow the bigram vocabulary with one training description.
    pub fn fit_document(&mut self, description: &str) {
        let tokens = self.tokenize(description);
        let grams = bigrams(&tokens);
        self.vocab.add_document(grams.iter().map(|s| s.as_str()));
    }

    /// Freeze the vocabulary and fit IDF weights from its document counts.
    pub fn finalize(&mut self, variant: IdfVariant) -> Result<()> {
        self.vocab.freeze();
        let table = fit_tfidf::<f64>(&self.vocab, variant)?;
        self.idf = Some(IdfTableStorage {
            weights: table.weights,
            variant,
        });
        Ok(())
    }

    pub fn idf_table<R: Real>(&self) -> Option<IdfTable<R>> {
        self.idf.as_ref().map(|t| IdfTable {
            weights: t
                .weights
                .iter()
                .map(|&w| crate::real::real(w))
                .collect(),
            variant: t.variant,
        })
    }

    /// Raw bigram term frequencies over the vocabulary. `present` is false
    /// iff the description is absent.
    pub fn encode_counts<R: Real>(&self, description: Option<&str>) -> FeatureVector<R> {
        let text = match description {
            Some(t) => t,
            None => return FeatureVector::absent(Section::Descriptions),
        };
        let tokens = self.tokenize(text);
        let grams = bigrams(&tokens);
        let entries = self
            .vocab
            .transform(grams.iter().map(|s| s.as_str()))
            .into_iter()
            .map(|(i, c)| (i, real_usize(c as usize)))
            .collect();
        FeatureVector {
            section: Section::Descriptions,
            entries,
            missing: BTreeSet::new(),
            present: true,
        }
    }

    /// TF-IDF weighted, L2-normalized description vector.
    pub fn encode<R: Real>(&self, description: Option<&str>) -> FeatureVector<R> {
        let counts = self.encode_counts::<R>(description);
        if !counts.present {
            return counts;
        }
        match self.idf_table::<R>() {
            Some(idf) => apply_tfidf(&counts, &idf),
            None => counts,
        }
    }

    pub fn dim(&self) -> usize {
        self.vocab.len()
    }
}
