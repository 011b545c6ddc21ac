//! Naive Bayes over demographics fields, robust to missing values: the
//! likelihood product simply skips absent fields. Categorical fields use
//! Laplace-smoothed frequency tables, numeric fields a Gaussian per class.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::demographics::{FieldKind, FieldSpec, FieldValue};
use crate::profile::Label;
use crate::real::{real, real_usize, to_f64, Real};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(default)]
pub struct NaiveBayesParams<R: Real> {
    /// Laplace smoothing pseudo-count.
    pub alpha: R,
    /// Lower bound on Gaussian variances.
    pub variance_floor: R,
}

impl<R: Real> Default for NaiveBayesParams<R> {
    fn default() -> Self {
        Self {
            alpha: R::one(),
            variance_floor: real(1e-9),
        }
    }
}

/// Class index convention: 0 = real, 1 = scam.
const REAL: usize = 0;
const SCAM: usize = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
enum FieldModel<R: Real> {
    Categorical {
        /// Per class: observation count per one-hot slot.
        counts: [Vec<u64>; 2],
        /// Per class: rows where the field was present.
        present: [u64; 2],
        arity: u32,
    },
    Gaussian {
        mean: [R; 2],
        variance: [R; 2],
        /// Per class: rows where the field was present.
        present: [u64; 2],
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct NaiveBayes<R: Real> {
    /// Field schema this model was trained against, in iteration order.
    fields: Vec<FieldSpec>,
    field_models: Vec<FieldModel<R>>,
    class_counts: [u64; 2],
    params: NaiveBayesParams<R>,
}

fn class_of(label: Label) -> usize {
    match label {
        Label::Real => REAL,
        Label::Scam => SCAM,
    }
}

impl<R: Real> NaiveBayes<R> {
    /// Train from decoded field rows. Requires at least one row per class.
    pub fn train(
        fields: &[FieldSpec],
        rows: &[(Vec<FieldValue<R>>, Label)],
        params: NaiveBayesParams<R>,
    ) -> Result<Self> {
        let mut class_counts = [0u64; 2];
        for (_, label) in rows {
            class_counts[class_of(*label)] += 1;
        }
        if class_counts[REAL] == 0 || class_counts[SCAM] == 0 {
            return Err(Error::DegenerateClass);
        }

        let mut field_models = Vec::with_capacity(fields.len());
        for (f, spec) in fields.iter().enumerate() {
            match spec.kind {
                FieldKind::Categorical => {
                    let mut counts = [vec![0u64; spec.arity as usize], vec![0u64; spec.arity as usize]];
                    let mut present = [0u64; 2];
                    for (values, label) in rows {
                        if let FieldValue::Category(slot) = values[f] {
                            let c = class_of(*label);
                            counts[c][slot as usize] += 1;
                            present[c] += 1;
                        }
                    }
                    field_models.push(FieldModel::Categorical {
                        counts,
                        present,
                        arity: spec.arity,
                    });
                }
                FieldKind::Numeric => {
                    let mut sums = [R::zero(); 2];
                    let mut present = [0u64; 2];
                    for (values, label) in rows {
                        if let FieldValue::Numeric(x) = values[f] {
                            let c = class_of(*label);
                            sums[c] = sums[c] + x;
                            present[c] += 1;
                        }
                    }
                    let mut mean = [R::zero(); 2];
                    let mut variance = [params.variance_floor; 2];
                    for c in 0..2 {
                        if present[c] > 0 {
                            mean[c] = sums[c] / real_usize(present[c] as usize);
                        }
                    }
                    let mut sq = [R::zero(); 2];
                    for (values, label) in rows {
                        if let FieldValue::Numeric(x) = values[f] {
                            let c = class_of(*label);
                            let d = x - mean[c];
                            sq[c] = sq[c] + d * d;
                        }
                    }
                    for c in 0..2 {
                        if present[c] > 0 {
                            variance[c] =
                                (sq[c] / real_usize(present[c] as usize)).max(params.variance_floor);
                        }
                    }
                    field_models.push(FieldModel::Gaussian {
                        mean,
                        variance,
                        present,
                    });
                }
            }
        }

        Ok(Self {
            fields: fields.to_vec(),
            field_models,
            class_counts,
            params,
        })
    }

    pub fn prior_scam(&self) -> R {
        real_usize::<R>(self.class_counts[SCAM] as usize)
            / real_usize((self.class_counts[REAL] + self.class_counts[SCAM]) as usize)
    }

    fn log_likelihood(&self, model: &FieldModel<R>, value: &FieldValue<R>, class: usize) -> Option<R> {
        match (model, value) {
            (_, FieldValue::Missing) => None,
            (
                FieldModel::Categorical {
                    counts,
                    present,
                    arity,
                },
                FieldValue::Category(slot),
            ) => {
                let alpha = to_f64(self.params.alpha);
                let num = counts[class][*slot as usize] as f64 + alpha;
                let den = present[class] as f64 + alpha * *arity as f64;
                Some(real((num / den).ln()))
            }
            (
                FieldModel::Gaussian {
                    mean,
                    variance,
                    present,
                },
                FieldValue::Numeric(x),
            ) => {
                // a class that never saw this field contributes nothing
                if present[class] == 0 {
                    return None;
                }
                let m = to_f64(mean[class]);
                let var = to_f64(variance[class]);
                let xv = to_f64(*x);
                let log_pdf = -0.5 * ((xv - m) * (xv - m) / var
                    + var.ln()
                    + std::f64::consts::TAU.ln());
                Some(real(log_pdf))
            }
            _ => None,
        }
    }

    /// Posterior P(scam | present fields), accumulated in log space. Missing
    /// fields are skipped, so the empty row returns the class priors. A
    /// field only contributes when both classes can score it (a Gaussian a
    /// class never observed would skew the product one-sidedly).
    pub fn posterior_scam(&self, values: &[FieldValue<R>]) -> R {
        let total = real_usize((self.class_counts[REAL] + self.class_counts[SCAM]) as usize);
        let mut log_p = [
            (real_usize::<R>(self.class_counts[REAL] as usize) / total).ln(),
            (real_usize::<R>(self.class_counts[SCAM] as usize) / total).ln(),
        ];
        for (f, value) in values.iter().enumerate() {
            let model = &self.field_models[f];
            if let (Some(ll_real), Some(ll_scam)) = (
                self.log_likelihood(model, value, REAL),
                self.log_likelihood(model, value, SCAM),
            ) {
                log_p[REAL] = log_p[REAL] + ll_real;
                log_p[SCAM] = log_p[SCAM] + ll_scam;
            }
        }
        // normalize via log-sum-exp
        let max = log_p[REAL].max(log_p[SCAM]);
        let denom = (log_p[REAL] - max).exp() + (log_p[SCAM] - max).exp();
        (log_p[SCAM] - max).exp() / denom
    }

    /// Model with fields iterated in a different order; posterior must not
    /// change. Used by the permutation-invariance property check.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            fields: order.iter().map(|&i| self.fields[i].clone()).collect(),
            field_models: order.iter().map(|&i| self.field_models[i].clone()).collect(),
            class_counts: self.class_counts,
            params: self.params,
        }
    }

    pub fn fields(&self) -> &[FieldSpec] {
        &self.fields
    }
}

/// Reorder a decoded row to match a permuted model.
pub fn permute_values<R: Real>(values: &[FieldValue<R>], order: &[usize]) -> Vec<FieldValue<R>> {
    order.iter().map(|&i| values[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gender_field() -> Vec<FieldSpec> {
        vec![FieldSpec {
            name: "gender".into(),
            kind: FieldKind::Categorical,
            offset: 0,
            arity: 2,
        }]
    }

    fn toy_model() -> NaiveBayes<f64> {
        // 2 scam rows gender=male(0), 2 real rows gender=female(1)
        let rows = vec![
            (vec![FieldValue::Category(0)], Label::Scam),
            (vec![FieldValue::Category(0)], Label::Scam),
            (vec![FieldValue::Category(1)], Label::Real),
            (vec![FieldValue::Category(1)], Label::Real),
        ];
        NaiveBayes::train(&gender_field(), &rows, NaiveBayesParams::default()).unwrap()
    }

    #[test]
    fn laplace_table_matches_hand_computation() {
        let m = toy_model();
        // P(male|scam) = (2+1)/(2+2) = 0.75
        let ll = m
            .log_likelihood(&m.field_models[0], &FieldValue::Category(0), super::SCAM)
            .unwrap();
        assert!((ll.exp() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn hand_computed_posterior() {
        let m = toy_model();
        // p = 0.5*0.75 / (0.5*0.75 + 0.5*0.25) = 0.75
        let p = m.posterior_scam(&[FieldValue::Category(0)]);
        assert!((p - 0.75).abs() < 1e-9);
    }

    #[test]
    fn empty_row_returns_priors() {
        let rows = vec![
            (vec![FieldValue::Category(0)], Label::Scam),
            (vec![FieldValue::Category(1)], Label::Real),
            (vec![FieldValue::Category(1)], Label::Real),
            (vec![FieldValue::Category(1)], Label::Real),
        ];
        let m = NaiveBayes::<f64>::train(&gender_field(), &rows, NaiveBayesParams::default()).unwrap();
        let p = m.posterior_scam(&[FieldValue::Missing]);
        assert!((p - 0.25).abs() < 1e-12);
        assert!((m.prior_scam() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn uninformative_feature_leaves_posterior_unchanged() {
        let fields = vec![
            FieldSpec {
                name: "gender".into(),
                kind: FieldKind::Categorical,
                offset: 0,
                arity: 2,
            },
            FieldSpec {
                name: "country".into(),
                kind: FieldKind::Categorical,
                offset: 2,
                arity: 2,
            },
        ];
        // country is split identically in both classes
        let rows = vec![
            (vec![FieldValue::Category(0), FieldValue::Category(0)], Label::Scam),
            (vec![FieldValue::Category(0), FieldValue::Category(1)], Label::Scam),
            (vec![FieldValue::Category(1), FieldValue::Category(0)], Label::Real),
            (vec![FieldValue::Category(1), FieldValue::Category(1)], Label::Real),
        ];
        let m = NaiveBayes::<f64>::train(&fields, &rows, NaiveBayesParams::default()).unwrap();
        let with = m.posterior_scam(&[FieldValue::Category(0), FieldValue::Category(0)]);
        let without = m.posterior_scam(&[FieldValue::Category(0), FieldValue::Missing]);
        assert!((with - without).abs() < 1e-12);
    }

    #[test]
    fn constant_numeric_feature_hits_variance_floor() {
        let fields = vec![FieldSpec {
            name: "age".into(),
            kind: FieldKind::Numeric,
            offset: 0,
            arity: 1,
        }];
        let rows = vec![
            (vec![FieldValue::Numeric(40.0)], Label::Scam),
            (vec![FieldValue::Numeric(40.0)], Label::Scam),
            (vec![FieldValue::Numeric(40.0)], Label::Real),
        ];
        let m = NaiveBayes::<f64>::train(&fields, &rows, NaiveBayesParams::default()).unwrap();
        let p = m.posterior_scam(&[FieldValue::Numeric(40.0)]);
        assert!(p.is_finite());
        assert!(p > 0.0 && p < 1.0);
    }

    #[test]
    fn single_class_training_is_degenerate() {
        let rows = vec![(vec![FieldValue::Category(0)], Label::Scam)];
        assert!(matches!(
            NaiveBayes::<f64>::train(&gender_field(), &rows, NaiveBayesParams::default()),
            Err(Error::DegenerateClass)
        ));
    }

    #[test]
    fn posterior_invariant_under_field_permutation() {
        let fields = vec![
            FieldSpec {
                name: "age".into(),
                kind: FieldKind::Numeric,
                offset: 0,
                arity: 1,
            },
            FieldSpec {
                name: "gender".into(),
                kind: FieldKind::Categorical,
                offset: 1,
                arity: 2,
            },
            FieldSpec {
                name: "country".into(),
                kind: FieldKind::Categorical,
                offset: 3,
                arity: 3,
            },
        ];
        let rows = vec![
            (
                vec![FieldValue::Numeric(31.0), FieldValue::Category(1), FieldValue::Category(0)],
                Label::Scam,
            ),
            (
                vec![FieldValue::Numeric(52.0), FieldValue::Category(0), FieldValue::Category(2)],
                Label::Scam,
            ),
            (
                vec![FieldValue::Numeric(44.0), FieldValue::Category(0), FieldValue::Category(1)],
                Label::Real,
            ),
            (
                vec![FieldValue::Numeric(39.0), FieldValue::Category(1), FieldValue::Category(1)],
                Label::Real,
            ),
        ];
        let m = NaiveBayes::<f64>::train(&fields, &rows, NaiveBayesParams::default()).unwrap();
        let probe = vec![
            FieldValue::Numeric(35.0),
            FieldValue::Category(1),
            FieldValue::Missing,
        ];
        let p = m.posterior_scam(&probe);
        for order in [[2usize, 0, 1], [1, 2, 0], [2, 1, 0]] {
            let permuted = m.permuted(&order);
            let q = permuted.posterior_scam(&permute_values(&probe, &order));
            assert!((p - q).abs() < 1e-12, "order {order:?}: {p} vs {q}");
        }
    }
}
