//! Sectioned feature extraction: demographics, image captions, and free-text
//! descriptions each produce one sparse vector per profile.

pub mod captions;
pub mod demographics;
pub mod descriptions;
pub mod occupation;
pub mod tfidf;
pub mod vocab;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::real::Real;

pub use captions::CaptionEncoder;
pub use demographics::{DemographicsEncoder, DEMOGRAPHIC_FIELDS};
pub use descriptions::DescriptionEncoder;
pub use occupation::OccupationLexicon;
pub use tfidf::{apply_tfidf, fit_tfidf, IdfTable, IdfVariant};
pub use vocab::Vocabulary;

/// Profile section a feature vector or model belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Section {
    Demographics,
    Captions,
    Descriptions,
}

impl Section {
    pub fn short(&self) -> &'static str {
        match self {
            Section::Demographics => "M",
            Section::Captions => "C",
            Section::Descriptions => "S",
        }
    }
}

/// Sparse entries sorted by feature index.
pub type SparseEntries<R> = Vec<(u32, R)>;

/// One section's features for one profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct FeatureVector<R: Real> {
    pub section: Section,
    /// Sparse feature index -> value, sorted by index.
    pub entries: SparseEntries<R>,
    /// Field names absent in the source profile (demographics only).
    pub missing: BTreeSet<String>,
    /// False iff the whole section is absent from the profile.
    pub present: bool,
}

impl<R: Real> FeatureVector<R> {
    pub fn absent(section: Section) -> Self {
        Self {
            section,
            entries: Vec::new(),
            missing: BTreeSet::new(),
            present: false,
        }
    }

    pub fn value(&self, index: u32) -> Option<R> {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .ok()
            .map(|pos| self.entries[pos].1)
    }

    pub fn l2_norm(&self) -> R {
        self.entries
            .iter()
            .map(|&(_, v)| v * v)
            .fold(R::zero(), |a, b| a + b)
            .sqrt()
    }
}

/// Dot product of two index-sorted sparse vectors.
pub fn sparse_dot<R: Real>(a: &SparseEntries<R>, b: &SparseEntries<R>) -> R {
    let mut sum = R::zero();
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                sum = sum + a[i].1 * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    sum
}

/// Squared Euclidean distance of two index-sorted sparse vectors.
pub fn sparse_sq_dist<R: Real>(a: &SparseEntries<R>, b: &SparseEntries<R>) -> R {
    let mut sum = R::zero();
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() || j < b.len() {
        let d = if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            let d = a[i].1;
            i += 1;
            d
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let d = b[j].1;
            j += 1;
            d
        } else {
            let d = a[i].1 - b[j].1;
            i += 1;
            j += 1;
            d
        };
        sum = sum + d * d;
    }
    sum
}
