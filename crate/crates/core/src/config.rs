//! Run configuration: seeds, split ratios, per-model hyperparameters and
//! feature-extraction settings. Serialized into every output bundle so a
//! run can be reproduced from its artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::classifiers::{LinearSvmParams, NaiveBayesParams, RandomForestParams, RbfSvmParams};
use crate::ensemble::VoteMode;
use crate::error::{Error, Result};
use crate::features::IdfVariant;
use crate::profile::SplitRatios;
use crate::similarity::{ShingleGranularity, DEFAULT_JACCARD_THRESHOLD, DEFAULT_SHINGLE_K};
use crate::text::TokenizerConfig;
use crate::Scalar;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ShingleConfig {
    pub k: usize,
    pub threshold: f64,
    pub granularity: ShingleGranularity,
}

impl Default for ShingleConfig {
    fn default() -> Self {
        Self {
            k: DEFAULT_SHINGLE_K,
            threshold: DEFAULT_JACCARD_THRESHOLD,
            granularity: ShingleGranularity::Character,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
#[derive(Default)]
pub struct DemographicsConfig {
    pub rf: RandomForestParams,
    pub nb: NaiveBayesParams<Scalar>,
}


#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Master seed; all randomness derives from it.
    pub seed: u64,
    pub ratios: SplitRatios,
    /// Cap on the 'or'-value Cartesian product per record.
    pub explosion_cap: usize,
    pub mode: VoteMode,
    /// Nominal threshold applied to each component probability.
    pub component_threshold: Scalar,
    pub tokenizer: TokenizerConfig,
    pub idf_variant: IdfVariant,
    pub shingle: ShingleConfig,
    pub demographics: DemographicsConfig,
    pub captions: RbfSvmParams<Scalar>,
    pub descriptions: LinearSvmParams<Scalar>,
    pub single: LinearSvmParams<Scalar>,
    pub ensemble: RbfSvmParams<Scalar>,
    /// Cross-validation folds inside the training partition.
    pub train_folds: usize,
    /// Cross-validation folds for the ensemble on the test partition.
    pub test_folds: usize,
    /// Optional occupation-lexicon override (JSON mapping category to patterns).
    pub lexicon_path: Option<PathBuf>,
    /// Optional caption stoplist override (one word per line).
    pub stoplist_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            ratios: SplitRatios::default(),
            explosion_cap: 64,
            mode: VoteMode::Weighted,
            component_threshold: 0.5,
            tokenizer: TokenizerConfig::default(),
            idf_variant: IdfVariant::SmoothPlusOne,
            shingle: ShingleConfig::default(),
            demographics: DemographicsConfig::default(),
            captions: RbfSvmParams::default(),
            descriptions: LinearSvmParams::default(),
            single: LinearSvmParams::default(),
            // the stacker sees 3-dimensional probability vectors in the unit
            // cube; the 1/d width default is far too flat at that scale
            ensemble: RbfSvmParams {
                gamma: Some(2.0),
                ..RbfSvmParams::default()
            },
            train_folds: 10,
            test_folds: 5,
            lexicon_path: None,
            stoplist_path: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        self.ratios.validate()?;
        if self.component_threshold <= 0.0 || self.component_threshold >= 1.0 {
            return Err(Error::Config(
                "component_threshold must be inside (0, 1)".into(),
            ));
        }
        if self.train_folds < 2 || self.test_folds < 2 {
            return Err(Error::Config("fold counts must be at least 2".into()));
        }
        if self.shingle.k == 0 {
            return Err(Error::Config("shingle k must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.shingle.threshold) {
            return Err(Error::Config("jaccard threshold must be in [0, 1]".into()));
        }
        Ok(())
    }
}
