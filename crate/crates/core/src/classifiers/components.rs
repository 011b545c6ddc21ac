//! Section components: each owns its encoder and trained model, emits a
//! calibrated scam probability for a profile, and falls back to the
//! training base rate (informed = false) when its section is absent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::demographics::DemographicsEncoder;
use crate::features::{CaptionEncoder, DescriptionEncoder, FeatureVector, Section};
use crate::profile::{Label, Profile};
use crate::real::Real;

use super::linear_svm::{LinearSvm, LinearSvmParams};
use super::naive_bayes::{NaiveBayes, NaiveBayesParams};
use super::random_forest::{RandomForest, RandomForestParams};
use super::rbf_svm::{RbfSvm, RbfSvmParams};
use super::ComponentPrediction;

/// Common surface of the three per-section classifiers.
pub trait Component<R: Real> {
    fn section(&self) -> Section;
    fn base_rate(&self) -> R;

    /// Probability from an encoded vector; `Err` on a section mismatch.
    fn predict_vector(&self, v: &FeatureVector<R>) -> Result<ComponentPrediction<R>>;

    fn encode(&self, profile: &Profile) -> FeatureVector<R>;

    fn predict_profile(&self, profile: &Profile) -> ComponentPrediction<R> {
        self.predict_vector(&self.encode(profile))
            .expect("own encoding always matches the section")
    }
}

fn check_section<R: Real>(expected: Section, v: &FeatureVector<R>) -> Result<()> {
    if v.section != expected {
        return Err(Error::SectionMismatch {
            expected,
            got: v.section,
        });
    }
    Ok(())
}

/// Scam share of the training labels.
pub fn scam_base_rate<R: Real>(labels: &[Label]) -> R {
    let scam = labels.iter().filter(|&&l| l == Label::Scam).count();
    if labels.is_empty() {
        crate::real::real(0.5)
    } else {
        crate::real::real_usize::<R>(scam) / crate::real::real_usize(labels.len())
    }
}

/// Joint Random-Forest + Naive-Bayes demographics model. Routing is a pure
/// function of the missing mask: complete rows go to the forest, rows with
/// any missing field go to Naive Bayes, absent sections get the base rate.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct JointDemographicsModel<R: Real> {
    pub rf: Option<RandomForest<R>>,
    pub nb: Option<NaiveBayes<R>>,
    pub base_rate: R,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DemographicsComponent<R: Real> {
    pub encoder: DemographicsEncoder,
    pub model: JointDemographicsModel<R>,
    pub threshold: R,
}

impl<R: Real> DemographicsComponent<R> {
    pub fn fit(
        train: &[&Profile],
        encoder: DemographicsEncoder,
        rf_params: RandomForestParams,
        nb_params: NaiveBayesParams<R>,
        threshold: R,
        seed: u64,
    ) -> Result<Self> {
        let labels: Vec<Label> = train.iter().map(|p| p.known_label()).collect();
        let base_rate = scam_base_rate(&labels);

        let encoded: Vec<FeatureVector<R>> = train.iter().map(|p| encoder.encode(p)).collect();

        // forest trains on complete cases only
        let mut rf_rows = Vec::new();
        let mut rf_labels = Vec::new();
        for (v, label) in encoded.iter().zip(&labels) {
            if v.present && v.missing.is_empty() {
                rf_rows.push(encoder.to_dense(v));
                rf_labels.push(*label == Label::Scam);
            }
        }
        let rf = if rf_rows.is_empty() {
            None
        } else {
            Some(RandomForest::train(&rf_rows, &rf_labels, rf_params, seed)?)
        };

        // Naive Bayes trains on every row whose section is present
        let mut nb_rows = Vec::new();
        for (v, label) in encoded.iter().zip(&labels) {
            if v.present {
                nb_rows.push((encoder.decode(v), *label));
            }
        }
        let nb = match NaiveBayes::train(encoder.fields(), &nb_rows, nb_params) {
            Ok(model) => Some(model),
            Err(Error::DegenerateClass) => None,
            Err(e) => return Err(e),
        };

        Ok(Self {
            encoder,
            model: JointDemographicsModel { rf, nb, base_rate },
            threshold,
        })
    }
}

impl<R: Real> Component<R> for DemographicsComponent<R> {
    fn section(&self) -> Section {
        Section::Demographics
    }

    fn base_rate(&self) -> R {
        self.model.base_rate
    }

    fn predict_vector(&self, v: &FeatureVector<R>) -> Result<ComponentPrediction<R>> {
        check_section(Section::Demographics, v)?;
        if !v.present {
            return Ok(ComponentPrediction::base_rate(
                Section::Demographics,
                self.model.base_rate,
                self.threshold,
            ));
        }
        if v.missing.is_empty() {
            if let Some(rf) = &self.model.rf {
                let p = rf.vote_fraction(&self.encoder.to_dense(v));
                return Ok(ComponentPrediction::new(
                    Section::Demographics,
                    p,
                    true,
                    self.threshold,
                ));
            }
        }
        if let Some(nb) = &self.model.nb {
            let p = nb.posterior_scam(&self.encoder.decode(v));
            return Ok(ComponentPrediction::new(
                Section::Demographics,
                p,
                true,
                self.threshold,
            ));
        }
        Ok(ComponentPrediction::base_rate(
            Section::Demographics,
            self.model.base_rate,
            self.threshold,
        ))
    }

    fn encode(&self, profile: &Profile) -> FeatureVector<R> {
        self.encoder.encode(profile)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CaptionsComponent<R: Real> {
    pub encoder: CaptionEncoder,
    pub svm: Option<RbfSvm<R>>,
    pub base_rate: R,
    pub threshold: R,
}

impl<R: Real> CaptionsComponent<R> {
    pub fn fit(
        train: &[&Profile],
        mut encoder: CaptionEncoder,
        params: RbfSvmParams<R>,
        threshold: R,
        seed: u64,
    ) -> Result<Self> {
        let labels: Vec<Label> = train.iter().map(|p| p.known_label()).collect();
        let base_rate = scam_base_rate(&labels);
        for p in train {
            encoder.fit_document(&p.captions);
        }
        encoder.freeze();

        let mut rows = Vec::new();
        let mut row_labels = Vec::new();
        for (p, label) in train.iter().zip(&labels) {
            let v: FeatureVector<R> = encoder.encode(&p.captions);
            if v.present {
                rows.push(v.entries);
                row_labels.push(*label == Label::Scam);
            }
        }
        let has_both = row_labels.iter().any(|&l| l) && row_labels.iter().any(|&l| !l);
        let svm = if rows.is_empty() || !has_both {
            None
        } else {
            Some(RbfSvm::train(&rows, &row_labels, encoder.dim(), params, seed)?)
        };
        Ok(Self {
            encoder,
            svm,
            base_rate,
            threshold,
        })
    }
}

impl<R: Real> Component<R> for CaptionsComponent<R> {
    fn section(&self) -> Section {
        Section::Captions
    }

    fn base_rate(&self) -> R {
        self.base_rate
    }

    fn predict_vector(&self, v: &FeatureVector<R>) -> Result<ComponentPrediction<R>> {
        check_section(Section::Captions, v)?;
        match (&self.svm, v.present) {
            (Some(svm), true) => Ok(ComponentPrediction::new(
                Section::Captions,
                svm.probability(&v.entries),
                true,
                self.threshold,
            )),
            _ => Ok(ComponentPrediction::base_rate(
                Section::Captions,
                self.base_rate,
                self.threshold,
            )),
        }
    }

    fn encode(&self, profile: &Profile) -> FeatureVector<R> {
        self.encoder.encode(&profile.captions)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DescriptionsComponent<R: Real> {
    pub encoder: DescriptionEncoder,
    pub svm: Option<LinearSvm<R>>,
    pub base_rate: R,
    pub threshold: R,
}

impl<R: Real> DescriptionsComponent<R> {
    pub fn fit(
        train: &[&Profile],
        mut encoder: DescriptionEncoder,
        idf_variant: crate::features::IdfVariant,
        params: LinearSvmParams<R>,
        threshold: R,
        seed: u64,
    ) -> Result<Self> {
        let labels: Vec<Label> = train.iter().map(|p| p.known_label()).collect();
        let base_rate = scam_base_rate(&labels);

        let mut any_description = false;
        for p in train {
            if let Some(text) = &p.description {
                encoder.fit_document(text);
                any_description = true;
            }
        }
        let svm = if any_description {
            encoder.finalize(idf_variant)?;
            let mut rows = Vec::new();
            let mut row_labels = Vec::new();
            for (p, label) in train.iter().zip(&labels) {
                let v: FeatureVector<R> = encoder.encode(p.description.as_deref());
                if v.present {
                    rows.push(v.entries);
                    row_labels.push(*label == Label::Scam);
                }
            }
            let has_both = row_labels.iter().any(|&l| l) && row_labels.iter().any(|&l| !l);
            if has_both {
                Some(LinearSvm::train(
                    &rows,
                    &row_labels,
                    encoder.dim(),
                    params,
                    seed,
                )?)
            } else {
                None
            }
        } else {
            None
        };

        Ok(Self {
            encoder,
            svm,
            base_rate,
            threshold,
        })
    }
}

impl<R: Real> Component<R> for DescriptionsComponent<R> {
    fn section(&self) -> Section {
        Section::Descriptions
    }

    fn base_rate(&self) -> R {
        self.base_rate
    }

    fn predict_vector(&self, v: &FeatureVector<R>) -> Result<ComponentPrediction<R>> {
        check_section(Section::Descriptions, v)?;
        match (&self.svm, v.present) {
            (Some(svm), true) => Ok(ComponentPrediction::new(
                Section::Descriptions,
                svm.probability(&v.entries),
                true,
                self.threshold,
            )),
            _ => Ok(ComponentPrediction::base_rate(
                Section::Descriptions,
                self.base_rate,
                self.threshold,
            )),
        }
    }

    fn encode(&self, profile: &Profile) -> FeatureVector<R> {
        self.encoder.encode(profile.description.as_deref())
    }
}
