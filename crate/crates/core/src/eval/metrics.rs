//! Confusion-matrix metrics with scam as the positive class.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{real, real_usize, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub fp: u64,
    pub tp: u64,
}

impl ConfusionMatrix {
    pub fn new(tn: u64, fn_: u64, fp: u64, tp: u64) -> Self {
        Self { tn, fn_, fp, tp }
    }

    /// Tally (predicted_scam, actual_scam) pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (bool, bool)>) -> Self {
        let mut cm = Self::default();
        for (predicted, actual) in pairs {
            match (predicted, actual) {
                (true, true) => cm.tp += 1,
                (true, false) => cm.fp += 1,
                (false, true) => cm.fn_ += 1,
                (false, false) => cm.tn += 1,
            }
        }
        cm
    }

    pub fn total(&self) -> u64 {
        self.tn + self.fn_ + self.fp + self.tp
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Metrics<R: Real> {
    pub precision: R,
    pub recall: R,
    pub f1: R,
    pub accuracy: R,
}

/// Precision, recall, F1 and accuracy; zero-denominator cases yield 0 by
/// convention rather than an error.
pub fn metrics<R: Real>(cm: &ConfusionMatrix) -> Result<Metrics<R>> {
    if cm.total() == 0 {
        return Err(Error::EmptyEvaluation);
    }
    let ratio = |num: u64, den: u64| -> R {
        if den == 0 {
            R::zero()
        } else {
            real_usize::<R>(num as usize) / real_usize(den as usize)
        }
    };
    let precision = ratio(cm.tp, cm.tp + cm.fp);
    let recall = ratio(cm.tp, cm.tp + cm.fn_);
    let f1 = if precision + recall > R::zero() {
        real::<R>(2.0) * precision * recall / (precision + recall)
    } else {
        R::zero()
    };
    let accuracy = ratio(cm.tp + cm.tn, cm.total());
    Ok(Metrics {
        precision,
        recall,
        f1,
        accuracy,
    })
}

/// F_beta = (1+b^2) p r / (b^2 p + r); beta expresses how much more recall
/// is valued than precision.
pub fn f_beta<R: Real>(precision: R, recall: R, beta: R) -> Result<R> {
    if precision == R::zero() && recall == R::zero() {
        return Err(Error::Undefined);
    }
    let b2 = beta * beta;
    Ok((R::one() + b2) * precision * recall / (b2 * precision + recall))
}
