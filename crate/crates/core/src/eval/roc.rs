//! ROC curve by threshold sweep over unique scores, with trapezoidal AUC.

use crate::error::{Error, Result};
use crate::real::{real, to_f64, Real};

/// Points sorted by false-positive rate, plus the trapezoidal AUC. The
/// sweep predicts scam when score >= threshold, over every unique score,
/// bracketed by the (0,0) and (1,1) endpoints.
pub fn roc_points<R: Real>(scores: &[R], labels: &[bool]) -> Result<(Vec<(R, R)>, R)> {
    assert_eq!(scores.len(), labels.len());
    let positives = labels.iter().filter(|&&l| l).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::SingleClass);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        to_f64(scores[b])
            .partial_cmp(&to_f64(scores[a]))
            .expect("finite scores")
    });

    let mut points: Vec<(f64, f64)> = vec![(0.0, 0.0)];
    let mut auc = 0.0f64;
    let (mut tp, mut fp) = (0usize, 0usize);
    let (mut last_fpr, mut last_tpr) = (0.0f64, 0.0f64);
    let mut i = 0usize;
    while i < order.len() {
        // consume the whole tie group at this score
        let score = scores[order[i]];
        while i < order.len() && scores[order[i]] == score {
            if labels[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        let tpr = tp as f64 / positives as f64;
        let fpr = fp as f64 / negatives as f64;
        auc += (fpr - last_fpr) * (tpr + last_tpr) / 2.0;
        points.push((fpr, tpr));
        last_fpr = fpr;
        last_tpr = tpr;
    }

    Ok((
        points.into_iter().map(|(f, t)| (real(f), real(t))).collect(),
        real(auc),
    ))
}
