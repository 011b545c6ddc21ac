//! Variant-group-respecting cross-validation.
//!
//! Every fold fits its models, vocabularies and IDF tables from scratch on
//! the k-1 training folds; the recipe records the ids it fitted on and the
//! harness rejects any fold that touched a held-out profile.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{FoldAssignment, Profile};
use crate::real::{real, to_f64, Real};

use super::metrics::{metrics, ConfusionMatrix, Metrics};

/// Instrumentation hook: recipes record every profile id used for fitting.
#[derive(Debug, Default)]
pub struct FitLog {
    fitted_ids: BTreeSet<String>,
}

impl FitLog {
    pub fn record<'a>(&mut self, profiles: impl IntoIterator<Item = &'a Profile>) {
        for p in profiles {
            self.fitted_ids.insert(p.id.clone());
        }
    }

    pub fn fitted_ids(&self) -> &BTreeSet<String> {
        &self.fitted_ids
    }
}

/// One training/scoring procedure run per fold. Returns (score, is_scam)
/// pairs for the held-out profiles.
pub trait FoldRecipe<R: Real>: Sync {
    fn run(
        &self,
        fold: usize,
        train: &[&Profile],
        eval: &[&Profile],
        log: &mut FitLog,
    ) -> Result<Vec<(R, bool)>>;
}

impl<R: Real, F> FoldRecipe<R> for F
where
    F: Fn(usize, &[&Profile], &[&Profile], &mut FitLog) -> Result<Vec<(R, bool)>> + Sync,
{
    fn run(
        &self,
        fold: usize,
        train: &[&Profile],
        eval: &[&Profile],
        log: &mut FitLog,
    ) -> Result<Vec<(R, bool)>> {
        self(fold, train, eval, log)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct FoldReport<R: Real> {
    pub fold: usize,
    pub cm: ConfusionMatrix,
    pub metrics: Metrics<R>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CvSummary<R: Real> {
    pub folds: Vec<FoldReport<R>>,
    pub mean: Metrics<R>,
    pub stddev: Metrics<R>,
}

/// Train on k-1 folds and score the held-out fold, for every fold. Scores
/// are thresholded at `threshold` for the per-fold confusion matrix.
pub fn cross_validate<R: Real>(
    profiles: &[Profile],
    folds: &FoldAssignment,
    recipe: &dyn FoldRecipe<R>,
    threshold: R,
) -> Result<CvSummary<R>> {
    let fold_reports: Vec<Result<FoldReport<R>>> = (0..folds.k)
        .into_par_iter()
        .map(|fold| {
            let mut train: Vec<&Profile> = Vec::new();
            let mut eval: Vec<&Profile> = Vec::new();
            for p in profiles {
                if folds.fold(&p.id) == fold {
                    eval.push(p);
                } else {
                    train.push(p);
                }
            }
            if eval.is_empty() {
                return Err(Error::Fold(format!("fold {fold} is empty")));
            }
            let mut log = FitLog::default();
            let scored = recipe.run(fold, &train, &eval, &mut log)?;

            let eval_ids: BTreeSet<&str> = eval.iter().map(|p| p.id.as_str()).collect();
            let overlap = log
                .fitted_ids()
                .iter()
                .filter(|id| eval_ids.contains(id.as_str()))
                .count();
            if overlap > 0 {
                return Err(Error::Leakage { overlap });
            }

            let cm = ConfusionMatrix::from_pairs(
                scored.iter().map(|&(score, actual)| (score >= threshold, actual)),
            );
            Ok(FoldReport {
                fold,
                cm,
                metrics: metrics(&cm)?,
            })
        })
        .collect();

    let mut reports = Vec::with_capacity(folds.k);
    for r in fold_reports {
        reports.push(r?);
    }
    let (mean, stddev) = summarize(&reports);
    Ok(CvSummary {
        folds: reports,
        mean,
        stddev,
    })
}

fn summarize<R: Real>(folds: &[FoldReport<R>]) -> (Metrics<R>, Metrics<R>) {
    let n = folds.len() as f64;
    let pick = |f: &dyn Fn(&Metrics<R>) -> R| -> (R, R) {
        let values: Vec<f64> = folds.iter().map(|r| to_f64(f(&r.metrics))).collect();
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        (real(mean), real(var.sqrt()))
    };
    let (p_mean, p_std) = pick(&|m| m.precision);
    let (r_mean, r_std) = pick(&|m| m.recall);
    let (f_mean, f_std) = pick(&|m| m.f1);
    let (a_mean, a_std) = pick(&|m| m.accuracy);
    (
        Metrics {
            precision: p_mean,
            recall: r_mean,
            f1: f_mean,
            accuracy: a_mean,
        },
        Metrics {
            precision: p_std,
            recall: r_std,
            f1: f_std,
            accuracy: a_std,
        },
    )
}
