//! Metrics, ROC, cross-validation and reporting.

pub mod cv;
pub mod metrics;
pub mod report;
pub mod roc;

pub use cv::{cross_validate, CvSummary, FitLog, FoldRecipe, FoldReport};
pub use metrics::{f_beta, metrics, ConfusionMatrix, Metrics};
pub use report::{
    corpus_stats, recall_by_tag, render_corpus_stats, render_rankings, render_tag_table,
    ClassStats, CorpusStats, EvaluationReport, FeatureRankings, ModelRow, RocReport, TagRecall,
};
pub use roc::roc_points;
