//! Kernel SVM with a radial basis kernel, trained by sequential minimal
//! optimization: pairwise dual updates with an error cache, alternating
//! full passes with passes over the non-bound working set.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{sparse_sq_dist, SparseEntries};
use crate::real::{real, to_f64, Real};

use super::platt::PlattScaler;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(default)]
pub struct RbfSvmParams<R: Real> {
    pub c: R,
    /// Kernel width; `None` defaults to 1/dim at fit time.
    pub gamma: Option<R>,
    /// KKT violation tolerance.
    pub tol: R,
    /// Cap on successful pairwise updates before NonConvergence.
    pub max_steps: usize,
    /// Fraction of rows held out for Platt calibration.
    pub calibration_holdout: f64,
    /// Kernel row cache budget in bytes.
    pub cache_bytes: usize,
}

impl<R: Real> Default for RbfSvmParams<R> {
    fn default() -> Self {
        Self {
            c: R::one(),
            gamma: None,
            tol: real(1e-3),
            max_steps: 500_000,
            calibration_holdout: 0.1,
            cache_bytes: 128 << 20,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct RbfSvm<R: Real> {
    /// Support vectors.
    pub support: Vec<SparseEntries<R>>,
    /// alpha_i * y_i per support vector.
    pub coefficients: Vec<R>,
    pub bias: R,
    pub gamma: R,
    pub platt: PlattScaler<R>,
    pub params: RbfSvmParams<R>,
}

pub fn rbf_kernel<R: Real>(a: &SparseEntries<R>, b: &SparseEntries<R>, gamma: R) -> R {
    (-gamma * sparse_sq_dist(a, b)).exp()
}

/// Lazy kernel matrix with a byte-budgeted row cache.
struct KernelCache<'a, R: Real> {
    rows: &'a [&'a SparseEntries<R>],
    gamma: R,
    cache: Vec<Option<Box<[R]>>>,
    cached_rows: usize,
    max_rows: usize,
}

impl<'a, R: Real> KernelCache<'a, R> {
    fn new(rows: &'a [&'a SparseEntries<R>], gamma: R, budget_bytes: usize) -> Self {
        let n = rows.len();
        let row_bytes = n.max(1) * std::mem::size_of::<R>();
        let max_rows = (budget_bytes / row_bytes.max(1)).max(2).min(n);
        Self {
            rows,
            gamma,
            cache: vec![None; n],
            cached_rows: 0,
            max_rows,
        }
    }

    fn compute_row(&self, i: usize) -> Box<[R]> {
        self.rows
            .iter()
            .map(|x| rbf_kernel(self.rows[i], x, self.gamma))
            .collect()
    }

    fn row(&mut self, i: usize) -> &[R] {
        if self.cache[i].is_none() {
            if self.cached_rows < self.max_rows {
                self.cached_rows += 1;
            } else {
                // over budget: evict the first cached row deterministically
                let victim = self
                    .cache
                    .iter()
                    .position(|r| r.is_some())
                    .expect("cache has rows");
                self.cache[victim] = None;
            }
            self.cache[i] = Some(self.compute_row(i));
        }
        self.cache[i].as_deref().expect("present after fill")
    }
}

struct Smo<'a, R: Real> {
    kernel: KernelCache<'a, R>,
    y: Vec<R>,
    alpha: Vec<R>,
    error: Vec<R>,
    b: R,
    c: R,
    tol: R,
    steps: usize,
    max_steps: usize,
}

const EPS: f64 = 1e-12;

impl<'a, R: Real> Smo<'a, R> {
    fn non_bound(&self, i: usize) -> bool {
        self.alpha[i] > R::zero() && self.alpha[i] < self.c
    }

    fn take_step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 {
            return false;
        }
        let (a1, a2) = (self.alpha[i1], self.alpha[i2]);
        let (y1, y2) = (self.y[i1], self.y[i2]);
        let (e1, e2) = (self.error[i1], self.error[i2]);
        let s = y1 * y2;

        let (low, high) = if s < R::zero() {
            ((a2 - a1).max(R::zero()), (self.c + a2 - a1).min(self.c))
        } else {
            ((a2 + a1 - self.c).max(R::zero()), (a2 + a1).min(self.c))
        };
        if to_f64(high - low) < EPS {
            return false;
        }

        let k11 = self.kernel.row(i1)[i1];
        let k12 = self.kernel.row(i1)[i2];
        let k22 = self.kernel.row(i2)[i2];
        let eta = k11 + k22 - real::<R>(2.0) * k12;

        let mut a2_new = if eta > real(EPS) {
            (a2 + y2 * (e1 - e2) / eta).max(low).min(high)
        } else {
            // flat direction: evaluate the dual objective at both clip ends
            // (decision convention here is f = sum alpha y K + b, hence E - b)
            let f1 = y1 * (e1 - self.b) - a1 * k11 - s * a2 * k12;
            let f2 = y2 * (e2 - self.b) - s * a1 * k12 - a2 * k22;
            let l1 = a1 + s * (a2 - low);
            let h1 = a1 + s * (a2 - high);
            let obj_low = l1 * f1 + low * f2 + real::<R>(0.5) * l1 * l1 * k11
                + real::<R>(0.5) * low * low * k22
                + s * low * l1 * k12;
            let obj_high = h1 * f1 + high * f2 + real::<R>(0.5) * h1 * h1 * k11
                + real::<R>(0.5) * high * high * k22
                + s * high * h1 * k12;
            if obj_low < obj_high - real(EPS) {
                low
            } else if obj_high < obj_low - real(EPS) {
                high
            } else {
                return false;
            }
        };
        // snap near-boundary values
        if to_f64(a2_new) < 1e-8 {
            a2_new = R::zero();
        } else if to_f64(self.c - a2_new) < 1e-8 {
            a2_new = self.c;
        }
        if to_f64((a2_new - a2).abs()) < EPS * to_f64(a2_new + a2) + EPS {
            return false;
        }
        let a1_new = a1 + s * (a2 - a2_new);

        let d1 = y1 * (a1_new - a1);
        let d2 = y2 * (a2_new - a2);
        let b1 = self.b - e1 - d1 * k11 - d2 * k12;
        let b2 = self.b - e2 - d1 * k12 - d2 * k22;
        let b_new = if a1_new > R::zero() && a1_new < self.c {
            b1
        } else if a2_new > R::zero() && a2_new < self.c {
            b2
        } else {
            (b1 + b2) / real(2.0)
        };
        let delta_b = b_new - self.b;

        self.alpha[i1] = a1_new;
        self.alpha[i2] = a2_new;
        self.b = b_new;

        let n = self.y.len();
        {
            let row1 = self.kernel.row(i1).to_vec();
            let row2 = self.kernel.row(i2).to_vec();
            for k in 0..n {
                self.error[k] = self.error[k] + d1 * row1[k] + d2 * row2[k] + delta_b;
            }
        }
        self.steps += 1;
        true
    }

    fn examine(&mut self, i2: usize, rng: &mut ChaCha20Rng) -> bool {
        let y2 = self.y[i2];
        let a2 = self.alpha[i2];
        let e2 = self.error[i2];
        let r2 = e2 * y2;
        let violates = (r2 < -self.tol && a2 < self.c) || (r2 > self.tol && a2 > R::zero());
        if !violates {
            return false;
        }

        // heuristic 1: max |E1 - E2| over non-bound points
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.y.len() {
            if self.non_bound(i) {
                let gap = to_f64((self.error[i] - e2).abs());
                if best.is_none_or(|(_, g)| gap > g) {
                    best = Some((i, gap));
                }
            }
        }
        if let Some((i1, _)) = best {
            if self.take_step(i1, i2) {
                return true;
            }
        }
        // heuristic 2: sweep non-bound from a random start
        let n = self.y.len();
        let start = rng.gen_range(0..n);
        for off in 0..n {
            let i1 = (start + off) % n;
            if self.non_bound(i1) && self.take_step(i1, i2) {
                return true;
            }
        }
        // heuristic 3: sweep everything from a random start
        let start = rng.gen_range(0..n);
        for off in 0..n {
            let i1 = (start + off) % n;
            if self.take_step(i1, i2) {
                return true;
            }
        }
        false
    }

    fn solve(&mut self, rng: &mut ChaCha20Rng) -> Result<()> {
        let n = self.y.len();
        let mut examine_all = true;
        let mut changed = 0usize;
        while changed > 0 || examine_all {
            changed = 0;
            for i in 0..n {
                if (examine_all || self.non_bound(i)) && self.examine(i, rng) {
                    changed += 1;
                }
                if self.steps > self.max_steps {
                    return Err(Error::NonConvergence(self.max_steps));
                }
            }
            examine_all = if examine_all { false } else { changed == 0 };
        }
        Ok(())
    }
}

impl<R: Real> RbfSvm<R> {
    pub fn train(
        rows: &[SparseEntries<R>],
        labels: &[bool],
        dim: usize,
        params: RbfSvmParams<R>,
        seed: u64,
    ) -> Result<Self> {
        assert_eq!(rows.len(), labels.len());
        if rows.is_empty() {
            return Err(Error::EmptyTraining);
        }
        if labels.iter().all(|&l| l) || labels.iter().all(|&l| !l) {
            return Err(Error::DegenerateClass);
        }
        let gamma = params
            .gamma
            .unwrap_or_else(|| R::one() / real(dim.max(1) as f64));

        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..rows.len()).collect();
        use rand::seq::SliceRandom;
        order.shuffle(&mut rng);
        let (cal_idx, mut fit_idx) =
            super::platt::calibration_split(&order, labels, params.calibration_holdout);
        fit_idx.sort_unstable();

        let fit_rows: Vec<&SparseEntries<R>> = fit_idx.iter().map(|&i| &rows[i]).collect();
        let y: Vec<R> = fit_idx
            .iter()
            .map(|&i| if labels[i] { R::one() } else { -R::one() })
            .collect();

        let mut smo = Smo {
            kernel: KernelCache::new(&fit_rows, gamma, params.cache_bytes),
            error: y.iter().map(|&yi| -yi).collect(),
            alpha: vec![R::zero(); y.len()],
            y,
            b: R::zero(),
            c: params.c,
            tol: params.tol,
            steps: 0,
            max_steps: params.max_steps,
        };
        smo.solve(&mut rng)?;

        let mut support = Vec::new();
        let mut coefficients = Vec::new();
        for (slot, &i) in fit_idx.iter().enumerate() {
            if smo.alpha[slot] > R::zero() {
                support.push(rows[i].clone());
                coefficients.push(smo.alpha[slot] * smo.y[slot]);
            }
        }
        let bias = smo.b;

        let decision = |x: &SparseEntries<R>| -> R {
            let mut sum = bias;
            for (sv, &coeff) in support.iter().zip(&coefficients) {
                sum = sum + coeff * rbf_kernel(sv, x, gamma);
            }
            sum
        };
        let (mut decisions, mut platt_labels): (Vec<R>, Vec<bool>) = if cal_idx.is_empty() {
            (
                rows.iter().map(&decision).collect(),
                labels.to_vec(),
            )
        } else {
            (
                cal_idx.iter().map(|&i| decision(&rows[i])).collect(),
                cal_idx.iter().map(|&i| labels[i]).collect(),
            )
        };
        if platt_labels.iter().all(|&l| l) || platt_labels.iter().all(|&l| !l) {
            decisions = rows.iter().map(&decision).collect();
            platt_labels = labels.to_vec();
        }
        let platt = PlattScaler::fit(&decisions, &platt_labels);

        Ok(Self {
            support,
            coefficients,
            bias,
            gamma,
            platt,
            params,
        })
    }

    /// Raw decision value sum_i alpha_i y_i K(x_i, x) + b.
    pub fn decision(&self, x: &SparseEntries<R>) -> R {
        let mut sum = self.bias;
        for (sv, &coeff) in self.support.iter().zip(&self.coefficients) {
            sum = sum + coeff * rbf_kernel(sv, x, self.gamma);
        }
        sum
    }

    /// Calibrated scam probability.
    pub fn probability(&self, x: &SparseEntries<R>) -> R {
        self.platt.probability(self.decision(x))
    }

    /// Linearized per-feature influence sum_i alpha_i y_i x_ij, used for
    /// keyword-weight reports.
    pub fn feature_influence(&self, dim: usize) -> Vec<R> {
        let mut influence = vec![R::zero(); dim];
        for (sv, &coeff) in self.support.iter().zip(&self.coefficients) {
            for &(j, xj) in sv {
                if (j as usize) < dim {
                    influence[j as usize] = influence[j as usize] + coeff * xj;
                }
            }
        }
        influence
    }
}
