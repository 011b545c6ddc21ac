//! Variant-group-constrained dataset splitting and k-fold assignment.
//!
//! Assignment is always by variant group: exploded variants of one original
//! record land in the same partition and the same fold, so near-duplicates
//! can never leak across a train/evaluate boundary.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{variant_groups, Profile};

/// Train/test/validation proportions over variant groups.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitRatios {
    pub train: f64,
    pub test: f64,
    pub validation: f64,
}

impl Default for SplitRatios {
    fn default() -> Self {
        Self {
            train: 0.6,
            test: 0.2,
            validation: 0.2,
        }
    }
}

impl SplitRatios {
    pub fn validate(&self) -> Result<()> {
        let parts = [self.train, self.test, self.validation];
        let sum: f64 = parts.iter().sum();
        if parts.iter().any(|&r| !(0.0..=1.0).contains(&r)) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Ratio { sum });
        }
        Ok(())
    }
}

/// A three-way partition of a corpus.
#[derive(Debug, Clone)]
pub struct DatasetSplit {
    pub train: Vec<Profile>,
    pub test: Vec<Profile>,
    pub validation: Vec<Profile>,
    pub seed: u64,
}

/// Fold index per profile id; all members of a variant group share a fold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub fold_of: BTreeMap<String, usize>,
    pub k: usize,
}

impl FoldAssignment {
    pub fn fold(&self, id: &str) -> usize {
        self.fold_of[id]
    }
}

/// Largest-remainder apportionment of `total` groups across the ratios;
/// counts sum to `total` and each is within one group of `ratio * total`.
fn apportion(total: usize, ratios: &[f64; 3]) -> [usize; 3] {
    let mut counts = [0usize; 3];
    let mut remainders: Vec<(usize, f64)> = Vec::with_capacity(3);
    let mut assigned = 0usize;
    for (i, &r) in ratios.iter().enumerate() {
        let exact = r * total as f64;
        let base = exact.floor() as usize;
        counts[i] = base;
        assigned += base;
        remainders.push((i, exact - base as f64));
    }
    remainders.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    for (i, _) in remainders.into_iter().take(total - assigned) {
        counts[i] += 1;
    }
    counts
}

/// Split by variant group. Deterministic for a fixed seed; ratios apply to
/// group counts (the group constraint makes exact profile-level ratios
/// unattainable).
pub fn split_dataset(corpus: &[Profile], ratios: SplitRatios, seed: u64) -> Result<DatasetSplit> {
    ratios.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let mut groups = variant_groups(corpus);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    groups.shuffle(&mut rng);

    let counts = apportion(groups.len(), &[ratios.train, ratios.test, ratios.validation]);
    let mut assignment: BTreeMap<&str, usize> = BTreeMap::new();
    let mut cursor = 0usize;
    for (partition, &count) in counts.iter().enumerate() {
        for group in &groups[cursor..cursor + count] {
            assignment.insert(group.as_str(), partition);
        }
        cursor += count;
    }

    let mut split = DatasetSplit {
        train: Vec::new(),
        test: Vec::new(),
        validation: Vec::new(),
        seed,
    };
    for p in corpus {
        match assignment[p.variant_group.as_str()] {
            0 => split.train.push(p.clone()),
            1 => split.test.push(p.clone()),
            _ => split.validation.push(p.clone()),
        }
    }
    Ok(split)
}

/// Assign variant groups to k folds round-robin after a seeded shuffle.
/// Fold sizes differ by at most one group.
pub fn group_k_folds(profiles: &[Profile], k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(Error::Fold(format!("k must be at least 2, got {k}")));
    }
    let mut groups = variant_groups(profiles);
    if groups.len() < k {
        return Err(Error::Fold(format!(
            "{} variant groups cannot fill {k} folds",
            groups.len()
        )));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    groups.shuffle(&mut rng);

    let mut group_fold: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, group) in groups.iter().enumerate() {
        group_fold.insert(group.as_str(), i % k);
    }

    let mut fold_of = BTreeMap::new();
    for p in profiles {
        fold_of.insert(p.id.clone(), group_fold[p.variant_group.as_str()]);
    }
    Ok(FoldAssignment { fold_of, k })
}
