//! End-to-end training and evaluation, following the staged methodology:
//! per-component cross-validation inside the training partition, component
//! training on the full training partition, stacker development on the
//! test-partition probabilities, and final reporting on a held-out set that
//! is refused if it overlaps anything the bundle was fitted on.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::classifiers::{
    CaptionsComponent, Component, ComponentPrediction, DemographicsComponent,
    DescriptionsComponent,
};
use crate::config::RunConfig;
use crate::ensemble::{
    predict_weighted_vote, simple_vote, train_weighted_vote, EnsembleModel, SingleClassifier,
    VoteMode, VoteResult,
};
use crate::error::{Error, Result};
use crate::eval::{
    cross_validate, f_beta, metrics, recall_by_tag, roc_points, ConfusionMatrix, CvSummary,
    EvaluationReport, FeatureRankings, FitLog, Metrics, ModelRow, RocReport,
};
use crate::features::captions::{load_stoplist, parse_stoplist, DEFAULT_STOPLIST};
use crate::features::demographics::DemographicsEncoder;
use crate::features::{CaptionEncoder, DescriptionEncoder, OccupationLexicon};
use crate::profile::{group_k_folds, split_dataset, DatasetSplit, Label, Profile};
use crate::similarity::SimilarityBaseline;
use crate::Scalar;

/// Partition membership recorded in the bundle, used by the leakage guard.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitIds {
    pub seed: u64,
    pub train: Vec<String>,
    pub test: Vec<String>,
    pub validation: Vec<String>,
    /// Variant groups of the train and test partitions.
    pub fitted_groups: BTreeSet<String>,
}

/// Everything cmd_train produces, in memory.
#[derive(Debug, Clone)]
pub struct TrainedBundle {
    pub config: RunConfig,
    pub demographics: DemographicsComponent<Scalar>,
    pub captions: CaptionsComponent<Scalar>,
    pub descriptions: DescriptionsComponent<Scalar>,
    pub similarity: SimilarityBaseline,
    pub single: Option<SingleClassifier<Scalar>>,
    pub ensemble: Option<EnsembleModel<Scalar>>,
    pub splits: SplitIds,
    /// Per-component cross-validation inside the training partition.
    pub cv_train: BTreeMap<String, CvSummary<Scalar>>,
    /// Ensemble cross-validation on the test partition.
    pub cv_test_ensemble: Option<CvSummary<Scalar>>,
}

pub struct TrainOutput {
    pub bundle: TrainedBundle,
    pub split: DatasetSplit,
}

fn load_lexicon(config: &RunConfig) -> Result<OccupationLexicon> {
    match &config.lexicon_path {
        Some(path) => OccupationLexicon::load(path),
        None => Ok(OccupationLexicon::default_lexicon()),
    }
}

fn caption_encoder_for(config: &RunConfig) -> Result<CaptionEncoder> {
    let stoplist = match &config.stoplist_path {
        Some(path) => load_stoplist(path)?,
        None => parse_stoplist(DEFAULT_STOPLIST),
    };
    Ok(CaptionEncoder::new(stoplist))
}

fn fit_demographics(
    train: &[&Profile],
    config: &RunConfig,
    lexicon: &OccupationLexicon,
    seed: u64,
) -> Result<DemographicsComponent<Scalar>> {
    let encoder = DemographicsEncoder::fit(train, lexicon.clone());
    DemographicsComponent::fit(
        train,
        encoder,
        config.demographics.rf,
        config.demographics.nb,
        config.component_threshold,
        seed,
    )
}

fn fit_captions(
    train: &[&Profile],
    config: &RunConfig,
    seed: u64,
) -> Result<CaptionsComponent<Scalar>> {
    CaptionsComponent::fit(
        train,
        caption_encoder_for(config)?,
        config.captions,
        config.component_threshold,
        seed,
    )
}

fn fit_descriptions(
    train: &[&Profile],
    config: &RunConfig,
    seed: u64,
) -> Result<DescriptionsComponent<Scalar>> {
    DescriptionsComponent::fit(
        train,
        DescriptionEncoder::new(config.tokenizer.clone()),
        config.idf_variant,
        config.descriptions,
        config.component_threshold,
        seed,
    )
}

fn require_both_classes(profiles: &[Profile]) -> Result<()> {
    let scam = profiles.iter().filter(|p| p.is_scam()).count();
    if scam == 0 || scam == profiles.len() {
        return Err(Error::DegenerateClass);
    }
    Ok(())
}

const SEED_DEMOGRAPHICS: u64 = 1;
const SEED_CAPTIONS: u64 = 2;
const SEED_DESCRIPTIONS: u64 = 3;
const SEED_ENSEMBLE: u64 = 4;
const SEED_SINGLE: u64 = 5;
const SEED_TRAIN_FOLDS: u64 = 6;
const SEED_TEST_FOLDS: u64 = 7;
const SEED_CV_BASE: u64 = 1000;

/// Train every model of the bundle from a labeled corpus.
pub fn train(corpus: &[Profile], config: &RunConfig) -> Result<TrainOutput> {
    config.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    require_both_classes(corpus)?;
    let lexicon = load_lexicon(config)?;
    let seed = config.seed;

    let split = split_dataset(corpus, config.ratios, seed)?;
    require_both_classes(&split.train)?;

    // step 1: individual performance levels by k-fold CV inside training
    let train_folds = group_k_folds(
        &split.train,
        config.train_folds,
        seed.wrapping_add(SEED_TRAIN_FOLDS),
    )?;
    let mut cv_train = BTreeMap::new();
    {
        let recipe = |fold: usize, tr: &[&Profile], ev: &[&Profile], log: &mut FitLog| {
            log.record(tr.iter().copied());
            let component =
                fit_demographics(tr, config, &lexicon, seed + SEED_CV_BASE + fold as u64)?;
            Ok(score_component(&component, ev))
        };
        cv_train.insert(
            "demographics".to_string(),
            cross_validate(&split.train, &train_folds, &recipe, config.component_threshold)?,
        );
    }
    {
        let recipe = |fold: usize, tr: &[&Profile], ev: &[&Profile], log: &mut FitLog| {
            log.record(tr.iter().copied());
            let component = fit_captions(tr, config, seed + SEED_CV_BASE + 100 + fold as u64)?;
            Ok(score_component(&component, ev))
        };
        cv_train.insert(
            "captions".to_string(),
            cross_validate(&split.train, &train_folds, &recipe, config.component_threshold)?,
        );
    }
    {
        let recipe = |fold: usize, tr: &[&Profile], ev: &[&Profile], log: &mut FitLog| {
            log.record(tr.iter().copied());
            let component = fit_descriptions(tr, config, seed + SEED_CV_BASE + 200 + fold as u64)?;
            Ok(score_component(&component, ev))
        };
        cv_train.insert(
            "descriptions".to_string(),
            cross_validate(&split.train, &train_folds, &recipe, config.component_threshold)?,
        );
    }

    // step 2: components trained on the full training partition
    let train_refs: Vec<&Profile> = split.train.iter().collect();
    let demographics = fit_demographics(
        &train_refs,
        config,
        &lexicon,
        seed.wrapping_add(SEED_DEMOGRAPHICS),
    )?;
    let captions = fit_captions(&train_refs, config, seed.wrapping_add(SEED_CAPTIONS))?;
    let descriptions =
        fit_descriptions(&train_refs, config, seed.wrapping_add(SEED_DESCRIPTIONS))?;

    // similarity baseline: shingle sets of the training scam descriptions
    let scam_descriptions: Vec<String> = split
        .train
        .iter()
        .filter(|p| p.is_scam())
        .filter_map(|p| p.description.clone())
        .collect();
    let similarity = SimilarityBaseline::fit(
        scam_descriptions,
        config.shingle.k,
        config.shingle.threshold,
        config.shingle.granularity,
    );

    // steps 3-4: component probabilities for the test partition drive the
    // stacker and its five-fold cross-validation
    let mut ensemble = None;
    let mut cv_test_ensemble = None;
    if config.mode == VoteMode::Weighted {
        require_both_classes(&split.test)?;
        let prob_of: BTreeMap<&str, ([Scalar; 3], Label)> = split
            .test
            .iter()
            .map(|p| {
                let preds = predict_components(&demographics, &captions, &descriptions, p);
                (
                    p.id.as_str(),
                    (
                        [preds[0].p_scam, preds[1].p_scam, preds[2].p_scam],
                        p.known_label(),
                    ),
                )
            })
            .collect();

        let test_folds = group_k_folds(
            &split.test,
            config.test_folds,
            seed.wrapping_add(SEED_TEST_FOLDS),
        )?;
        let recipe = |fold: usize, tr: &[&Profile], ev: &[&Profile], log: &mut FitLog| {
            log.record(tr.iter().copied());
            let rows: Vec<([Scalar; 3], Label)> =
                tr.iter().map(|p| prob_of[p.id.as_str()]).collect();
            let model = train_weighted_vote(
                &rows,
                config.ensemble,
                config.component_threshold,
                seed + SEED_CV_BASE + 300 + fold as u64,
            )?;
            Ok(ev
                .iter()
                .map(|p| {
                    let (probs, label) = prob_of[p.id.as_str()];
                    let score = model.stacker.probability(&vec![
                        (0, probs[0]),
                        (1, probs[1]),
                        (2, probs[2]),
                    ]);
                    (score, label == Label::Scam)
                })
                .collect())
        };
        cv_test_ensemble = Some(cross_validate(
            &split.test,
            &test_folds,
            &recipe,
            0.5,
        )?);

        let rows: Vec<([Scalar; 3], Label)> = split
            .test
            .iter()
            .map(|p| prob_of[p.id.as_str()])
            .collect();
        ensemble = Some(train_weighted_vote(
            &rows,
            config.ensemble,
            config.component_threshold,
            seed.wrapping_add(SEED_ENSEMBLE),
        )?);
    }

    // step 6: the single all-features baseline trains on train plus test
    let train_test: Vec<&Profile> = split.train.iter().chain(split.test.iter()).collect();
    let single = match SingleClassifier::fit(
        &train_test,
        DemographicsEncoder::fit(&train_test, lexicon.clone()),
        caption_encoder_for(config)?,
        DescriptionEncoder::new(config.tokenizer.clone()),
        config.single,
        seed.wrapping_add(SEED_SINGLE),
    ) {
        Ok(model) => Some(model),
        Err(Error::DegenerateClass) => None,
        Err(e) => return Err(e),
    };

    let fitted_groups: BTreeSet<String> = split
        .train
        .iter()
        .chain(split.test.iter())
        .map(|p| p.variant_group.clone())
        .collect();
    let splits = SplitIds {
        seed,
        train: split.train.iter().map(|p| p.id.clone()).collect(),
        test: split.test.iter().map(|p| p.id.clone()).collect(),
        validation: split.validation.iter().map(|p| p.id.clone()).collect(),
        fitted_groups,
    };

    Ok(TrainOutput {
        bundle: TrainedBundle {
            config: config.clone(),
            demographics,
            captions,
            descriptions,
            similarity,
            single,
            ensemble,
            splits,
            cv_train,
            cv_test_ensemble,
        },
        split,
    })
}

fn score_component<C: Component<Scalar>>(component: &C, eval: &[&Profile]) -> Vec<(Scalar, bool)> {
    eval.iter()
        .map(|p| (component.predict_profile(p).p_scam, p.is_scam()))
        .collect()
}

pub fn predict_components(
    demographics: &DemographicsComponent<Scalar>,
    captions: &CaptionsComponent<Scalar>,
    descriptions: &DescriptionsComponent<Scalar>,
    profile: &Profile,
) -> [ComponentPrediction<Scalar>; 3] {
    [
        demographics.predict_profile(profile),
        captions.predict_profile(profile),
        descriptions.predict_profile(profile),
    ]
}

impl TrainedBundle {
    pub fn components(
        &self,
        profile: &Profile,
    ) -> [ComponentPrediction<Scalar>; 3] {
        predict_components(&self.demographics, &self.captions, &self.descriptions, profile)
    }

    /// Ensemble decision under the bundle's vote mode.
    pub fn vote(&self, profile: &Profile) -> VoteResult<Scalar> {
        let preds = self.components(profile);
        match (&self.ensemble, self.config.mode) {
            (Some(model), VoteMode::Weighted) => predict_weighted_vote(model, &preds),
            _ => simple_vote(&preds),
        }
    }
}

/// One output line of cmd_predict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileDecision {
    pub id: String,
    pub decision: Label,
    /// Ensemble score in the unit interval (stacker probability, or mean component
    /// probability under simple vote).
    pub score: Scalar,
    pub votes_for_scam: Scalar,
    pub p_m: Scalar,
    pub p_c: Scalar,
    pub p_s: Scalar,
    pub informed_m: bool,
    pub informed_c: bool,
    pub informed_s: bool,
}

fn decision_of(bundle: &TrainedBundle, profile: &Profile, threshold: Option<Scalar>) -> ProfileDecision {
    let vote = bundle.vote(profile);
    let decision = match threshold {
        Some(t) => {
            if vote.score >= t {
                Label::Scam
            } else {
                Label::Real
            }
        }
        None => vote.decision,
    };
    let b = &vote.component_breakdown;
    ProfileDecision {
        id: profile.id.clone(),
        decision,
        score: vote.score,
        votes_for_scam: vote.votes_for_scam,
        p_m: b[0].p_scam,
        p_c: b[1].p_scam,
        p_s: b[2].p_scam,
        informed_m: b[0].informed,
        informed_c: b[1].informed,
        informed_s: b[2].informed,
    }
}

/// Batch prediction, order-preserving. Total: every profile gets a line.
pub fn predict(
    bundle: &TrainedBundle,
    profiles: &[Profile],
    threshold: Option<Scalar>,
) -> Vec<ProfileDecision> {
    profiles
        .iter()
        .map(|p| decision_of(bundle, p, threshold))
        .collect()
}

/// Refuse evaluation sets that overlap the fitted partitions by id or by
/// variant group.
pub fn check_leakage(bundle: &TrainedBundle, eval: &[Profile]) -> Result<()> {
    let fitted_ids: BTreeSet<&str> = bundle
        .splits
        .train
        .iter()
        .chain(bundle.splits.test.iter())
        .map(|s| s.as_str())
        .collect();
    let overlap = eval
        .iter()
        .filter(|p| {
            fitted_ids.contains(p.id.as_str())
                || bundle.splits.fitted_groups.contains(&p.variant_group)
        })
        .count();
    if overlap > 0 {
        return Err(Error::Leakage { overlap });
    }
    Ok(())
}

fn row(name: &str, pairs: Vec<(bool, bool)>) -> Result<ModelRow<Scalar>> {
    let cm = ConfusionMatrix::from_pairs(pairs);
    Ok(ModelRow {
        name: name.to_string(),
        cm,
        metrics: metrics(&cm)?,
    })
}

/// Full results table on a labeled held-out set: the three components, the
/// similarity baseline, simple vote, the single classifier and the weighted
/// vote, plus ROC, per-tag recall and feature rankings.
pub fn evaluate(
    bundle: &TrainedBundle,
    eval: &[Profile],
) -> Result<(EvaluationReport<Scalar>, Vec<ProfileDecision>)> {
    if eval.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    check_leakage(bundle, eval)?;

    let component_preds: Vec<[ComponentPrediction<Scalar>; 3]> =
        eval.iter().map(|p| bundle.components(p)).collect();
    let actual: Vec<bool> = eval.iter().map(|p| p.is_scam()).collect();

    let mut rows = Vec::new();
    for (idx, name) in ["demographics", "captions", "description"].iter().enumerate() {
        rows.push(row(
            name,
            component_preds
                .iter()
                .zip(&actual)
                .map(|(preds, &a)| (preds[idx].nominal == Label::Scam, a))
                .collect(),
        )?);
    }

    rows.push(row(
        "similarity-only",
        eval.iter()
            .zip(&actual)
            .map(|(p, &a)| {
                let (label, _) = bundle
                    .similarity
                    .classify_or_default(p.description.as_deref());
                (label == Label::Scam, a)
            })
            .collect(),
    )?);

    let simple_votes: Vec<VoteResult<Scalar>> = component_preds
        .iter()
        .map(simple_vote)
        .collect();
    rows.push(row(
        "simple-vote",
        simple_votes
            .iter()
            .zip(&actual)
            .map(|(v, &a)| (v.decision == Label::Scam, a))
            .collect(),
    )?);

    if let Some(single) = &bundle.single {
        rows.push(row(
            "single",
            eval.iter()
                .zip(&actual)
                .map(|(p, &a)| (single.predict(p).0 == Label::Scam, a))
                .collect(),
        )?);
    }

    let mut final_decisions: Vec<bool> = simple_votes
        .iter()
        .map(|v| v.decision == Label::Scam)
        .collect();
    let mut final_scores: Vec<Scalar> = simple_votes.iter().map(|v| v.score).collect();
    if let Some(model) = &bundle.ensemble {
        let weighted: Vec<VoteResult<Scalar>> = component_preds
            .iter()
            .map(|preds| predict_weighted_vote(model, preds))
            .collect();
        rows.push(row(
            "weighted-vote",
            weighted
                .iter()
                .zip(&actual)
                .map(|(v, &a)| (v.decision == Label::Scam, a))
                .collect(),
        )?);
        final_decisions = weighted.iter().map(|v| v.decision == Label::Scam).collect();
        final_scores = weighted.iter().map(|v| v.score).collect();
    }

    let roc = match roc_points(&final_scores, &actual) {
        Ok((points, auc)) => Some(RocReport { points, auc }),
        Err(Error::SingleClass) => None,
        Err(e) => return Err(e),
    };

    let eval_refs: Vec<&Profile> = eval.iter().collect();
    let tag_recall = recall_by_tag(&eval_refs, &final_decisions);

    let report = EvaluationReport {
        rows,
        roc,
        tag_recall: (!tag_recall.is_empty()).then_some(tag_recall),
        rankings: Some(feature_rankings(bundle)),
    };
    let decisions = predict(bundle, eval, None);
    Ok((report, decisions))
}

/// Rankings from the trained models: per-field forest importance, top
/// description bigrams by linear weight, and linearized caption keyword
/// influences.
pub fn feature_rankings(bundle: &TrainedBundle) -> FeatureRankings {
    let mut rankings = FeatureRankings::default();

    if let Some(rf) = &bundle.demographics.model.rf {
        let mut by_field: BTreeMap<String, f64> = BTreeMap::new();
        for (index, &value) in rf.importance().iter().enumerate() {
            let field = bundle
                .demographics
                .encoder
                .field_of_index(index as u32)
                .to_string();
            *by_field.entry(field).or_insert(0.0) += value;
        }
        let mut pairs: Vec<(String, f64)> = by_field.into_iter().collect();
        pairs.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        rankings.demographics = pairs;
    }

    if let Some(svm) = &bundle.descriptions.svm {
        let (positive, negative) = svm.top_weights(10);
        let vocab = &bundle.descriptions.encoder.vocab;
        rankings.scam_bigrams = positive
            .into_iter()
            .filter(|&(_, w)| w > 0.0)
            .map(|(i, w)| (vocab.term(i).to_string(), w))
            .collect();
        rankings.real_bigrams = negative
            .into_iter()
            .map(|(i, w)| (vocab.term(i).to_string(), w))
            .collect();
    }

    if let Some(svm) = &bundle.captions.svm {
        let influence = svm.feature_influence(bundle.captions.encoder.dim());
        let vocab = &bundle.captions.encoder.vocab;
        let mut indexed: Vec<(usize, f64)> = influence
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(i, &v)| (i, v))
            .collect();
        indexed.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        rankings.scam_caption_keywords = indexed
            .iter()
            .take(5)
            .filter(|&&(_, v)| v > 0.0)
            .map(|&(i, v)| (vocab.term(i as u32).to_string(), v))
            .collect();
        rankings.real_caption_keywords = indexed
            .iter()
            .rev()
            .take(5)
            .filter(|&&(_, v)| v < 0.0)
            .map(|&(i, v)| (vocab.term(i as u32).to_string(), v))
            .collect();
    }

    rankings
}

/// Threshold recommendation from an F_beta sweep over the ensemble score.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TuneReport {
    pub beta: Scalar,
    pub threshold: Scalar,
    pub precision: Scalar,
    pub recall: Scalar,
    pub f_beta: Scalar,
    pub metrics: Metrics<Scalar>,
    pub cm: ConfusionMatrix,
}

/// Sweep the decision threshold over every unique score, maximizing F_beta.
/// Ties prefer higher recall, then the lower threshold.
pub fn tune(bundle: &TrainedBundle, profiles: &[Profile], beta: Scalar) -> Result<TuneReport> {
    if profiles.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    require_both_classes(profiles)?;

    let scored: Vec<(Scalar, bool)> = profiles
        .iter()
        .map(|p| (decision_of(bundle, p, None).score, p.is_scam()))
        .collect();
    sweep_thresholds(&scored, beta)
}

/// The F_beta threshold sweep over (score, is_scam) pairs.
pub fn sweep_thresholds(scored: &[(Scalar, bool)], beta: Scalar) -> Result<TuneReport> {
    let mut thresholds: Vec<Scalar> = scored.iter().map(|&(s, _)| s).collect();
    thresholds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    thresholds.dedup();

    let mut best: Option<TuneReport> = None;
    for &threshold in &thresholds {
        let cm = ConfusionMatrix::from_pairs(
            scored.iter().map(|&(s, a)| (s >= threshold, a)),
        );
        let m: Metrics<Scalar> = metrics(&cm)?;
        let score = match f_beta(m.precision, m.recall, beta) {
            Ok(s) => s,
            Err(Error::Undefined) => continue,
            Err(e) => return Err(e),
        };
        let candidate = TuneReport {
            beta,
            threshold,
            precision: m.precision,
            recall: m.recall,
            f_beta: score,
            metrics: m,
            cm,
        };
        let better = match &best {
            None => true,
            Some(b) => {
                score > b.f_beta
                    || (score == b.f_beta && m.recall > b.recall)
                    || (score == b.f_beta && m.recall == b.recall && threshold < b.threshold)
            }
        };
        if better {
            best = Some(candidate);
        }
    }
    best.ok_or(Error::Undefined)
}
