//! Platt scaling: sigmoid calibration of decision values into probabilities,
//! fitted by Newton iterations with backtracking on the regularized
//! log-likelihood (prior-corrected targets).

use serde::{Deserialize, Serialize};

use crate::real::{real, to_f64, Real};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct PlattScaler<R: Real> {
    /// p(f) = 1 / (1 + exp(a*f + b)); a <= 0 so p is monotone in f.
    pub a: R,
    pub b: R,
}

/// Minimum holdout rows (and per-class rows) for a sigmoid fit that places
/// its midpoint reliably.
const MIN_CALIBRATION_ROWS: usize = 20;
const MIN_CALIBRATION_PER_CLASS: usize = 3;

/// Split shuffled indices into (calibration, fit). The calibration holdout
/// is kept only when it is large enough to pin a sigmoid and the remaining
/// fit side still has both classes; otherwise calibration is empty and the
/// model trains on everything (the caller then calibrates on training rows).
pub fn calibration_split(
    order: &[usize],
    labels: &[bool],
    fraction: f64,
) -> (Vec<usize>, Vec<usize>) {
    let holdout = ((order.len() as f64 * fraction).round() as usize)
        .min(order.len().saturating_sub(2));
    let (cal, fit) = order.split_at(holdout);
    let count = |idx: &[usize], class: bool| idx.iter().filter(|&&i| labels[i] == class).count();
    let usable = cal.len() >= MIN_CALIBRATION_ROWS
        && count(cal, true) >= MIN_CALIBRATION_PER_CLASS
        && count(cal, false) >= MIN_CALIBRATION_PER_CLASS
        && count(fit, true) > 0
        && count(fit, false) > 0;
    if usable {
        (cal.to_vec(), fit.to_vec())
    } else {
        (Vec::new(), order.to_vec())
    }
}

impl<R: Real> PlattScaler<R> {
    /// Identity-ish scaler emitting the positive-class rate of a degenerate
    /// fit; used when no calibration data is available.
    pub fn flat(rate: R) -> Self {
        let r = to_f64(rate).clamp(1e-9, 1.0 - 1e-9);
        Self {
            a: R::zero(),
            b: real(((1.0 - r) / r).ln()),
        }
    }

    /// Fit on decision values and boolean labels (true = positive class).
    pub fn fit(decisions: &[R], labels: &[bool]) -> Self {
        assert_eq!(decisions.len(), labels.len());
        let n_pos = labels.iter().filter(|&&l| l).count() as f64;
        let n_neg = labels.len() as f64 - n_pos;
        if n_pos == 0.0 || n_neg == 0.0 || decisions.is_empty() {
            let rate = if decisions.is_empty() {
                0.5
            } else {
                n_pos / (n_pos + n_neg)
            };
            return Self::flat(real(rate));
        }

        let hi_target = (n_pos + 1.0) / (n_pos + 2.0);
        let lo_target = 1.0 / (n_neg + 2.0);
        let f: Vec<f64> = decisions.iter().map(|&d| to_f64(d)).collect();
        let t: Vec<f64> = labels
            .iter()
            .map(|&l| if l { hi_target } else { lo_target })
            .collect();

        let objective = |a: f64, b: f64| -> f64 {
            let mut sum = 0.0;
            for (&fi, &ti) in f.iter().zip(&t) {
                let z = a * fi + b;
                // -[t*log(p) + (1-t)*log(1-p)] written stably
                sum += if z >= 0.0 {
                    ti * z + (1.0 + (-z).exp()).ln()
                } else {
                    (ti - 1.0) * z + (1.0 + z.exp()).ln()
                };
            }
            sum
        };

        let mut a = 0.0;
        let mut b = ((n_neg + 1.0) / (n_pos + 1.0)).ln();
        let mut fval = objective(a, b);
        let sigma = 1e-12;
        for _ in 0..100 {
            let (mut h11, mut h22, mut h12) = (sigma, sigma, 0.0);
            let (mut g1, mut g2) = (0.0, 0.0);
            for (&fi, &ti) in f.iter().zip(&t) {
                let z = a * fi + b;
                let (p, q) = if z >= 0.0 {
                    let e = (-z).exp();
                    (e / (1.0 + e), 1.0 / (1.0 + e))
                } else {
                    let e = z.exp();
                    (1.0 / (1.0 + e), e / (1.0 + e))
                };
                let d2 = p * q;
                h11 += fi * fi * d2;
                h22 += d2;
                h12 += fi * d2;
                let d1 = ti - p;
                g1 += fi * d1;
                g2 += d1;
            }
            if g1.abs() < 1e-5 && g2.abs() < 1e-5 {
                break;
            }
            let det = h11 * h22 - h12 * h12;
            let da = -(h22 * g1 - h12 * g2) / det;
            let db = -(-h12 * g1 + h11 * g2) / det;
            let gd = g1 * da + g2 * db;
            let mut step = 1.0;
            loop {
                let (na, nb) = (a + step * da, b + step * db);
                let nf = objective(na, nb);
                if nf < fval + 1e-4 * step * gd {
                    a = na;
                    b = nb;
                    fval = nf;
                    break;
                }
                step /= 2.0;
                if step < 1e-10 {
                    // line search failed; keep current point
                    return Self::finish(a, b, n_pos, n_neg);
                }
            }
        }
        Self::finish(a, b, n_pos, n_neg)
    }

    fn finish(a: f64, b: f64, n_pos: f64, n_neg: f64) -> Self {
        if a > 0.0 {
            // anti-correlated fit; fall back to the flat base-rate scaler so
            // calibrated output stays monotone in the decision value
            return Self::flat(real(n_pos / (n_pos + n_neg)));
        }
        Self {
            a: real(a),
            b: real(b),
        }
    }

    /// Calibrated probability in (0, 1).
    pub fn probability(&self, decision: R) -> R {
        let z = to_f64(self.a) * to_f64(decision) + to_f64(self.b);
        let p = if z >= 0.0 {
            let e = (-z).exp();
            e / (1.0 + e)
        } else {
            1.0 / (1.0 + z.exp())
        };
        real(p.clamp(f64::MIN_POSITIVE, 1.0 - 1e-15))
    }
}
