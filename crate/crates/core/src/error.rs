//! Error types shared across the crate.

use std::path::PathBuf;

use thiserror::Error;

use crate::features::Section;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed JSON on a corpus line.
    #[error("line {line}: malformed JSON: {message}")]
    Parse { line: usize, message: String },

    /// Structurally valid JSON that violates the corpus schema.
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },

    /// 'or'-value Cartesian product larger than the configured cap.
    #[error("'or'-value explosion yields {product} variants, cap is {cap}")]
    ExplosionLimit { product: usize, cap: usize },

    #[error("split ratios must be non-negative and sum to 1 (got sum {sum})")]
    Ratio { sum: f64 },

    #[error("fold assignment: {0}")]
    Fold(String),

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("training data does not contain both classes")]
    DegenerateClass,

    #[error("no training rows")]
    EmptyTraining,

    #[error("optimizer did not converge within {0} iterations")]
    NonConvergence(usize),

    #[error("model expects section {expected:?}, vector is {got:?}")]
    SectionMismatch { expected: Section, got: Section },

    #[error("shingle sets use different k ({a} vs {b})")]
    KMismatch { a: usize, b: usize },

    #[error("no reference shingle sets to compare against")]
    EmptyReference,

    #[error("empty evaluation set")]
    EmptyEvaluation,

    #[error("F_beta is undefined when precision and recall are both zero")]
    Undefined,

    #[error("need both classes to sweep ROC thresholds")]
    SingleClass,

    #[error("bundle: {0}")]
    Bundle(String),

    #[error("vocabulary hash mismatch: model was built for {expected}, got {got}")]
    VocabHashMismatch { expected: String, got: String },

    #[error("evaluation set overlaps the bundle's training data ({overlap} ids or variant groups)")]
    Leakage { overlap: usize },

    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn schema(line: usize, message: impl Into<String>) -> Self {
        Error::Schema {
            line,
            message: message.into(),
        }
    }
}
