//! Linear SVM trained by primal hinge-loss SGD with a deterministic epoch
//! schedule. The per-epoch objective is recorded and kept non-increasing by
//! halving the step size and replaying an epoch whenever it would rise.
//! Probabilities come from Platt scaling fitted on an internal holdout.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::SparseEntries;
use crate::real::{real, real_usize, to_f64, Real};

use super::platt::PlattScaler;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(default)]
pub struct LinearSvmParams<R: Real> {
    /// Soft-margin cost; regularization strength is 1/C.
    pub c: R,
    pub epochs: usize,
    /// Initial SGD step size.
    pub eta0: R,
    /// Fraction of rows held out for Platt calibration.
    pub calibration_holdout: f64,
}

impl<R: Real> Default for LinearSvmParams<R> {
    fn default() -> Self {
        Self {
            c: R::one(),
            epochs: 20,
            eta0: real(0.5),
            calibration_holdout: 0.1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct LinearSvm<R: Real> {
    pub weights: Vec<R>,
    pub bias: R,
    pub platt: PlattScaler<R>,
    /// Full-objective value after each epoch (index 0 = before training).
    pub objective_history: Vec<R>,
    pub params: LinearSvmParams<R>,
}

/// Scaled weight vector: w = scale * v, so the L2 shrink step is O(1).
struct ScaledWeights<R: Real> {
    v: Vec<R>,
    scale: R,
}

impl<R: Real> ScaledWeights<R> {
    fn new(dim: usize) -> Self {
        Self {
            v: vec![R::zero(); dim],
            scale: R::one(),
        }
    }

    fn shrink(&mut self, factor: R) {
        self.scale = self.scale * factor;
        if self.scale < real(1e-9) {
            self.materialize();
        }
    }

    fn add_sparse(&mut self, x: &SparseEntries<R>, coeff: R) {
        let inv = coeff / self.scale;
        for &(i, xi) in x {
            self.v[i as usize] = self.v[i as usize] + xi * inv;
        }
    }

    fn dot(&self, x: &SparseEntries<R>) -> R {
        let mut sum = R::zero();
        for &(i, xi) in x {
            sum = sum + self.v[i as usize] * xi;
        }
        sum * self.scale
    }

    fn materialize(&mut self) {
        for w in &mut self.v {
            *w = *w * self.scale;
        }
        self.scale = R::one();
    }

    fn dense(mut self) -> Vec<R> {
        self.materialize();
        self.v
    }

    fn norm_sq(&self) -> R {
        let s: R = self.v.iter().map(|&w| w * w).sum();
        s * self.scale * self.scale
    }
}

fn hinge_objective<R: Real>(
    rows: &[&SparseEntries<R>],
    ys: &[R],
    w: &ScaledWeights<R>,
    bias: R,
    lambda: R,
) -> R {
    let mut loss = R::zero();
    for (x, &y) in rows.iter().zip(ys) {
        let margin = y * (w.dot(x) + bias);
        loss = loss + (R::one() - margin).max(R::zero());
    }
    lambda / real(2.0) * w.norm_sq() + loss / real_usize(rows.len())
}

impl<R: Real> LinearSvm<R> {
    /// Train on sparse rows with boolean labels (true = scam). `dim` is the
    /// feature-space dimension.
    pub fn train(
        rows: &[SparseEntries<R>],
        labels: &[bool],
        dim: usize,
        params: LinearSvmParams<R>,
        seed: u64,
    ) -> Result<Self> {
        assert_eq!(rows.len(), labels.len());
        if rows.is_empty() {
            return Err(Error::EmptyTraining);
        }
        if labels.iter().all(|&l| l) || labels.iter().all(|&l| !l) {
            return Err(Error::DegenerateClass);
        }

        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.shuffle(&mut rng);
        let (calibration_idx, train_idx) =
            super::platt::calibration_split(&order, labels, params.calibration_holdout);

        let sgd_rows: Vec<&SparseEntries<R>> = train_idx.iter().map(|&i| &rows[i]).collect();
        let sgd_ys: Vec<R> = train_idx
            .iter()
            .map(|&i| if labels[i] { R::one() } else { -R::one() })
            .collect();

        let n = sgd_rows.len();
        let lambda = R::one() / params.c;
        let mut w = ScaledWeights::new(dim);
        let mut bias = R::zero();
        let mut eta0 = params.eta0;
        let mut step_count = 0usize;
        let mut objective_history = Vec::with_capacity(params.epochs + 1);
        let mut best = hinge_objective(&sgd_rows, &sgd_ys, &w, bias, lambda);
        objective_history.push(best);

        let mut epoch_order: Vec<usize> = (0..n).collect();
        for _epoch in 0..params.epochs {
            epoch_order.shuffle(&mut rng);
            let snapshot_v = w.v.clone();
            let snapshot_scale = w.scale;
            let snapshot_bias = bias;
            let snapshot_steps = step_count;

            let mut accepted = false;
            for _attempt in 0..30 {
                for &ri in &epoch_order {
                    let t = real_usize(step_count);
                    let eta = eta0 / (R::one() + eta0 * lambda * t);
                    let x = sgd_rows[ri];
                    let y = sgd_ys[ri];
                    let margin = y * (w.dot(x) + bias);
                    w.shrink(R::one() - eta * lambda);
                    if margin < R::one() {
                        w.add_sparse(x, eta * y);
                        bias = bias + eta * y;
                    }
                    step_count += 1;
                }
                let objective = hinge_objective(&sgd_rows, &sgd_ys, &w, bias, lambda);
                if objective <= best + real(1e-12) {
                    best = best.min(objective);
                    objective_history.push(objective.min(*objective_history.last().unwrap()));
                    accepted = true;
                    break;
                }
                // replay the epoch with a smaller base step
                w.v = snapshot_v.clone();
                w.scale = snapshot_scale;
                bias = snapshot_bias;
                step_count = snapshot_steps;
                eta0 = eta0 / real(2.0);
            }
            if !accepted {
                // no step size made progress; record a flat epoch
                objective_history.push(*objective_history.last().unwrap());
            }
        }

        let weights = w.dense();
        let decision = |x: &SparseEntries<R>| sparse_dot(&weights, x, bias);
        let (cal_rows, cal_labels): (Vec<&SparseEntries<R>>, Vec<bool>) =
            if calibration_idx.is_empty() {
                ((0..rows.len()).map(|i| &rows[i]).collect(), labels.to_vec())
            } else {
                (
                    calibration_idx.iter().map(|&i| &rows[i]).collect(),
                    calibration_idx.iter().map(|&i| labels[i]).collect(),
                )
            };
        let mut decisions: Vec<R> = cal_rows.iter().map(|x| decision(x)).collect();
        let mut platt_labels = cal_labels;
        // a single-class holdout cannot fit a sigmoid; fall back to all rows
        if platt_labels.iter().all(|&l| l) || platt_labels.iter().all(|&l| !l) {
            decisions = rows.iter().map(decision).collect();
            platt_labels = labels.to_vec();
        }
        let platt = PlattScaler::fit(&decisions, &platt_labels);

        Ok(Self {
            weights,
            bias,
            platt,
            objective_history,
            params,
        })
    }

    /// Raw margin w . x + b.
    pub fn decision(&self, x: &SparseEntries<R>) -> R {
        sparse_dot(&self.weights, x, self.bias)
    }

    /// Calibrated scam probability.
    pub fn probability(&self, x: &SparseEntries<R>) -> R {
        self.platt.probability(self.decision(x))
    }

    /// Top positively and negatively weighted features.
    #[allow(clippy::type_complexity)]
    pub fn top_weights(&self, k: usize) -> (Vec<(u32, R)>, Vec<(u32, R)>) {
        let mut indexed: Vec<(u32, R)> = self
            .weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != R::zero())
            .map(|(i, &w)| (i as u32, w))
            .collect();
        indexed.sort_by(|a, b| to_f64(b.1).partial_cmp(&to_f64(a.1)).unwrap());
        let top_positive: Vec<(u32, R)> = indexed.iter().take(k).copied().collect();
        let mut top_negative: Vec<(u32, R)> =
            indexed.iter().rev().take(k).copied().collect();
        top_negative.retain(|&(_, w)| w < R::zero());
        (top_positive, top_negative)
    }
}

/// Margin against a dense weight vector plus bias.
fn sparse_dot<R: Real>(weights: &[R], x: &SparseEntries<R>, bias: R) -> R {
    let mut sum = bias;
    for &(i, xi) in x {
        if let Some(&w) = weights.get(i as usize) {
            sum = sum + w * xi;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_row(values: &[f64]) -> SparseEntries<f64> {
        values
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as u32, v))
            .collect()
    }

    /// 20 points, margin 1 around x0 = 0.
    fn separable_set() -> (Vec<SparseEntries<f64>>, Vec<bool>) {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..10 {
            rows.push(dense_row(&[1.0 + 0.2 * i as f64, 0.3 * i as f64]));
            labels.push(true);
            rows.push(dense_row(&[-1.0 - 0.2 * i as f64, 0.3 * i as f64]));
            labels.push(false);
        }
        (rows, labels)
    }

    #[test]
    fn separable_set_reaches_perfect_training_accuracy() {
        let (rows, labels) = separable_set();
        let svm = LinearSvm::train(&rows, &labels, 2, LinearSvmParams::default(), 7).unwrap();
        for (x, &y) in rows.iter().zip(&labels) {
            assert_eq!(svm.decision(x) > 0.0, y, "misclassified {x:?}");
        }
    }

    #[test]
    fn objective_history_is_non_increasing() {
        let (rows, labels) = separable_set();
        let svm = LinearSvm::train(&rows, &labels, 2, LinearSvmParams::default(), 3).unwrap();
        for pair in svm.objective_history.windows(2) {
            assert!(
                pair[1] <= pair[0] + 1e-6,
                "objective rose: {} -> {}",
                pair[0],
                pair[1]
            );
        }
        assert_eq!(svm.objective_history.len(), svm.params.epochs + 1);
    }

    #[test]
    fn single_class_is_degenerate() {
        let rows = vec![dense_row(&[1.0]), dense_row(&[2.0])];
        assert!(matches!(
            LinearSvm::<f64>::train(&rows, &[true, true], 1, LinearSvmParams::default(), 0),
            Err(Error::DegenerateClass)
        ));
    }

    #[test]
    fn duplicated_rows_keep_the_sign_pattern() {
        let (rows, labels) = separable_set();
        let svm1 = LinearSvm::train(&rows, &labels, 2, LinearSvmParams::default(), 11).unwrap();
        let mut doubled_rows = rows.clone();
        doubled_rows.extend(rows.iter().cloned());
        let mut doubled_labels = labels.clone();
        doubled_labels.extend(labels.iter().copied());
        let svm2 =
            LinearSvm::train(&doubled_rows, &doubled_labels, 2, LinearSvmParams::default(), 11)
                .unwrap();
        let probes = [
            dense_row(&[2.0, 1.0]),
            dense_row(&[-2.0, 1.0]),
            dense_row(&[3.0, 0.0]),
            dense_row(&[-3.0, 2.0]),
        ];
        for probe in &probes {
            assert_eq!(svm1.decision(probe) > 0.0, svm2.decision(probe) > 0.0);
        }
    }

    #[test]
    fn same_seed_same_model() {
        let (rows, labels) = separable_set();
        let a = LinearSvm::train(&rows, &labels, 2, LinearSvmParams::default(), 5).unwrap();
        let b = LinearSvm::train(&rows, &labels, 2, LinearSvmParams::default(), 5).unwrap();
        assert_eq!(a.weights, b.weights);
        assert_eq!(a.bias, b.bias);
    }

    #[test]
    fn probability_is_in_unit_interval() {
        let (rows, labels) = separable_set();
        let svm = LinearSvm::train(&rows, &labels, 2, LinearSvmParams::default(), 9).unwrap();
        for x in &rows {
            let p = svm.probability(x);
            assert!(p > 0.0 && p < 1.0);
        }
    }
}
