//! TF-IDF weighting with smoothed inverse document frequencies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{real, Real};

use super::vocab::Vocabulary;
use super::{FeatureVector, SparseEntries};

/// IDF formula variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdfVariant {
    /// ln((1+N)/(1+df)) + 1 (default).
    #[default]
    SmoothPlusOne,
    /// ln((1+N)/(1+df)).
    Smooth,
}

/// Per-index IDF weights fitted on a training corpus.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct IdfTable<R: Real> {
    pub weights: Vec<R>,
    pub variant: IdfVariant,
}

/// Fit IDF weights from a fitted vocabulary's document frequencies.
pub fn fit_tfidf<R: Real>(vocab: &Vocabulary, variant: IdfVariant) -> Result<IdfTable<R>> {
    if vocab.n_docs() == 0 {
        return Err(Error::EmptyCorpus);
    }
    let n = vocab.n_docs() as f64;
    let weights = (0..vocab.len() as u32)
        .map(|i| {
            let df = vocab.df(i) as f64;
            let smooth = ((1.0 + n) / (1.0 + df)).ln();
            real(match variant {
                IdfVariant::SmoothPlusOne => smooth + 1.0,
                IdfVariant::Smooth => smooth,
            })
        })
        .collect();
    Ok(IdfTable { weights, variant })
}

/// Weight term counts by IDF and L2-normalize. Zero vectors stay zero. The
/// sparsity pattern is preserved unless a weight is exactly zero.
pub fn apply_tfidf<R: Real>(v: &FeatureVector<R>, idf: &IdfTable<R>) -> FeatureVector<R> {
    let mut entries: SparseEntries<R> = v
        .entries
        .iter()
        .map(|&(i, tf)| {
            let w = idf
                .weights
                .get(i as usize)
                .copied()
                .unwrap_or_else(R::zero);
            (i, tf * w)
        })
        .collect();
    let norm = entries
        .iter()
        .map(|&(_, x)| x * x)
        .fold(R::zero(), |a, b| a + b)
        .sqrt();
    if norm > R::zero() {
        for entry in &mut entries {
            entry.1 = entry.1 / norm;
        }
    }
    FeatureVector {
        section: v.section,
        entries,
        missing: v.missing.clone(),
        present: v.present,
    }
}
