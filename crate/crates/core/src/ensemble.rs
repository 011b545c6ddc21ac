//! Vote ensembles over the three component predictions: an unweighted
//! majority vote, an RBF-kernel stacker trained on component probability
//! vectors, and a single all-features linear-SVM baseline.

use serde::{Deserialize, Serialize};

use crate::classifiers::{
    ComponentPrediction, LinearSvm, LinearSvmParams, PlattScaler, RbfSvm, RbfSvmParams,
};
use crate::error::{Error, Result};
use crate::features::demographics::DemographicsEncoder;
use crate::features::{CaptionEncoder, DescriptionEncoder, FeatureVector, SparseEntries};
use crate::profile::{Label, Profile};
use crate::real::{real, real_usize, to_f64, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VoteMode {
    Simple,
    #[default]
    Weighted,
}

/// Ensemble decision for one profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct VoteResult<R: Real> {
    pub decision: Label,
    /// Simple mode: number of scam votes. Weighted mode: the weighted sum
    /// of component probabilities, reported alongside the stacker score.
    pub votes_for_scam: R,
    pub component_breakdown: Vec<ComponentPrediction<R>>,
    /// Score used for ROC sweeps: mean probability (simple mode) or the
    /// stacker's calibrated probability (weighted mode).
    pub score: R,
}

/// Majority vote with unit weights: scam iff at least tau = floor(3/2)+1 = 2
/// nominal scam votes.
pub fn simple_vote<R: Real>(preds: &[ComponentPrediction<R>; 3]) -> VoteResult<R> {
    let tau = preds.len() / 2 + 1;
    let votes = preds
        .iter()
        .filter(|p| p.nominal == Label::Scam)
        .count();
    let score = preds
        .iter()
        .map(|p| p.p_scam)
        .fold(R::zero(), |a, b| a + b)
        / real_usize(preds.len());
    VoteResult {
        decision: if votes >= tau { Label::Scam } else { Label::Real },
        votes_for_scam: real_usize(votes),
        component_breakdown: preds.to_vec(),
        score,
    }
}

/// Weighted-vote ensemble: component accuracies as recorded weights and an
/// RBF stacker over the 3-dimensional probability vectors for decisions.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct EnsembleModel<R: Real> {
    /// Per-component accuracy on the stacker's development rows (M, C, S).
    pub weights: [R; 3],
    pub stacker: RbfSvm<R>,
    /// Vote threshold floor(sum w_i / 2) + 1, kept for vote-mode reporting.
    pub tau: R,
    /// Nominal threshold applied to each component probability.
    pub component_threshold: R,
    /// Decision threshold on the calibrated stacker score.
    pub decision_threshold: R,
    pub mode: VoteMode,
}

fn probability_row<R: Real>(probs: [R; 3]) -> SparseEntries<R> {
    vec![(0, probs[0]), (1, probs[1]), (2, probs[2])]
}

/// Train the stacker on (p_M, p_C, p_S) rows from the test partition.
pub fn train_weighted_vote<R: Real>(
    rows: &[([R; 3], Label)],
    params: RbfSvmParams<R>,
    component_threshold: R,
    seed: u64,
) -> Result<EnsembleModel<R>> {
    if rows.is_empty() {
        return Err(Error::EmptyTraining);
    }
    let labels: Vec<bool> = rows.iter().map(|(_, l)| *l == Label::Scam).collect();
    if labels.iter().all(|&l| l) || labels.iter().all(|&l| !l) {
        return Err(Error::DegenerateClass);
    }

    // weights: accuracy of each component's nominal label on these rows
    let mut weights = [R::zero(); 3];
    for (c, weight) in weights.iter_mut().enumerate() {
        let correct = rows
            .iter()
            .filter(|(probs, label)| {
                let nominal = probs[c] >= component_threshold;
                nominal == (*label == Label::Scam)
            })
            .count();
        *weight = real_usize::<R>(correct) / real_usize(rows.len());
    }
    let weight_sum: f64 = weights.iter().map(|&w| to_f64(w)).sum();
    let tau = real((weight_sum / 2.0).floor() + 1.0);

    let svm_rows: Vec<SparseEntries<R>> =
        rows.iter().map(|(probs, _)| probability_row(*probs)).collect();
    let stacker = RbfSvm::train(&svm_rows, &labels, 3, params, seed)?;

    Ok(EnsembleModel {
        weights,
        stacker,
        tau,
        component_threshold,
        decision_threshold: real(0.5),
        mode: VoteMode::Weighted,
    })
}

/// Stacker decision over the three component predictions. Total: base-rate
/// inputs are ordinary points and still get a decision.
pub fn predict_weighted_vote<R: Real>(
    model: &EnsembleModel<R>,
    preds: &[ComponentPrediction<R>; 3],
) -> VoteResult<R> {
    let probs = [preds[0].p_scam, preds[1].p_scam, preds[2].p_scam];
    let score = model.stacker.probability(&probability_row(probs));
    let weighted_sum = model
        .weights
        .iter()
        .zip(&probs)
        .map(|(&w, &p)| w * p)
        .fold(R::zero(), |a, b| a + b);
    VoteResult {
        decision: if score >= model.decision_threshold {
            Label::Scam
        } else {
            Label::Real
        },
        votes_for_scam: weighted_sum,
        component_breakdown: preds.to_vec(),
        score,
    }
}

/// Single linear-SVM baseline over the concatenation of all three sections,
/// with absolute feature values (no TF-IDF) and one missing-section
/// indicator per section.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SingleClassifier<R: Real> {
    pub demographics: DemographicsEncoder,
    pub captions: CaptionEncoder,
    pub descriptions: DescriptionEncoder,
    pub svm: LinearSvm<R>,
}

impl<R: Real> SingleClassifier<R> {
    fn dims(&self) -> (u32, u32, u32) {
        (
            self.demographics.dim(),
            self.captions.dim() as u32,
            self.descriptions.dim() as u32,
        )
    }

    pub fn total_dim(&self) -> usize {
        let (d, c, s) = self.dims();
        (d + c + s + 3) as usize
    }

    /// Concatenated row: demographics block, captions block, description
    /// bigram counts, then three missing-section indicators.
    pub fn encode(&self, profile: &Profile) -> SparseEntries<R> {
        let (d, c, s) = self.dims();
        let mut entries: SparseEntries<R> = Vec::new();

        let demo: FeatureVector<R> = self.demographics.encode(profile);
        entries.extend(demo.entries.iter().copied());

        let caps: FeatureVector<R> = self.captions.encode(&profile.captions);
        entries.extend(caps.entries.iter().map(|&(i, v)| (d + i, v)));

        let desc: FeatureVector<R> = self
            .descriptions
            .encode_counts(profile.description.as_deref());
        entries.extend(desc.entries.iter().map(|&(i, v)| (d + c + i, v)));

        let indicator_base = d + c + s;
        if !demo.present {
            entries.push((indicator_base, R::one()));
        }
        if !caps.present {
            entries.push((indicator_base + 1, R::one()));
        }
        if !desc.present {
            entries.push((indicator_base + 2, R::one()));
        }
        entries
    }

    /// Train on profiles (for the final protocol: train plus test data).
    pub fn fit(
        profiles: &[&Profile],
        demographics: DemographicsEncoder,
        mut captions: CaptionEncoder,
        mut descriptions: DescriptionEncoder,
        params: LinearSvmParams<R>,
        seed: u64,
    ) -> Result<Self> {
        for p in profiles {
            captions.fit_document(&p.captions);
            if let Some(text) = &p.description {
                descriptions.fit_document(text);
            }
        }
        captions.freeze();
        descriptions.vocab.freeze();

        let mut partial = Self {
            demographics,
            captions,
            descriptions,
            svm: LinearSvm {
                weights: Vec::new(),
                bias: R::zero(),
                platt: PlattScaler::flat(real(0.5)),
                objective_history: Vec::new(),
                params,
            },
        };
        let rows: Vec<SparseEntries<R>> = profiles.iter().map(|p| partial.encode(p)).collect();
        let labels: Vec<bool> = profiles.iter().map(|p| p.is_scam()).collect();
        partial.svm = LinearSvm::train(&rows, &labels, partial.total_dim(), params, seed)?;
        Ok(partial)
    }

    pub fn predict(&self, profile: &Profile) -> (Label, R) {
        let p = self.svm.probability(&self.encode(profile));
        let label = if p >= real(0.5) {
            Label::Scam
        } else {
            Label::Real
        };
        (label, p)
    }
}
