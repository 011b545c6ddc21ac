//! Detection toolkit for fraudulent online-dating profiles.
//!
//! A profile is scored by three section classifiers — demographics (joint
//! random forest + naive Bayes), image captions (radial-kernel SVM) and
//! description text (linear SVM over TF-IDF word bigrams) — whose
//! probabilities are combined by a simple majority vote or an RBF-stacked
//! weighted vote. A shingling/Jaccard near-duplicate check and a single
//! all-features SVM serve as baselines. Splits and folds are constrained so
//! that variants of one original record never straddle a train/evaluate
//! boundary.
//!
//! Numeric code is generic over the scalar type via [`real::Real`]
//! (`f32`/`f64`); the pipeline and CLI run in `f64`.

pub mod bundle;
pub mod classifiers;
pub mod config;
pub mod ensemble;
pub mod error;
pub mod eval;
pub mod features;
pub mod pipeline;
pub mod profile;
pub mod real;
pub mod similarity;
pub mod synthetic;
pub mod text;

pub use error::{Error, Result};
pub use real::Real;

/// Scalar type used by the pipeline and CLI.
pub type Scalar = f64;

// Concrete aliases of the generic models at the default scalar.
pub type FeatureVector = features::FeatureVector<Scalar>;
pub type ComponentPrediction = classifiers::ComponentPrediction<Scalar>;
pub type NaiveBayes = classifiers::NaiveBayes<Scalar>;
pub type RandomForest = classifiers::RandomForest<Scalar>;
pub type LinearSvm = classifiers::LinearSvm<Scalar>;
pub type RbfSvm = classifiers::RbfSvm<Scalar>;
pub type EnsembleModel = ensemble::EnsembleModel<Scalar>;
pub type VoteResult = ensemble::VoteResult<Scalar>;
pub type Metrics = eval::Metrics<Scalar>;
pub type EvaluationReport = eval::EvaluationReport<Scalar>;
