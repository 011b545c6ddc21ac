//! Per-section prediction models: a joint Random-Forest/Naive-Bayes
//! demographics classifier, a radial-kernel SVM over caption features and a
//! linear SVM over TF-IDF description bigrams, each emitting a calibrated
//! scam probability with a base-rate fallback when its section is absent.

pub mod components;
pub mod linear_svm;
pub mod naive_bayes;
pub mod platt;
pub mod random_forest;
pub mod rbf_svm;

use serde::{Deserialize, Serialize};

use crate::features::Section;
use crate::profile::Label;
use crate::real::Real;

pub use components::{
    CaptionsComponent, Component, DescriptionsComponent, DemographicsComponent,
    JointDemographicsModel,
};
pub use linear_svm::{LinearSvm, LinearSvmParams};
pub use naive_bayes::{NaiveBayes, NaiveBayesParams};
pub use platt::PlattScaler;
pub use random_forest::{RandomForest, RandomForestParams};
pub use rbf_svm::{RbfSvm, RbfSvmParams};

/// One classifier's output for one profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ComponentPrediction<R: Real> {
    pub component: Section,
    /// Scam probability in [0, 1].
    pub p_scam: R,
    /// False iff `p_scam` is the training base rate emitted because the
    /// section was absent.
    pub informed: bool,
    /// `p_scam` thresholded at the per-component nominal threshold.
    pub nominal: Label,
}

impl<R: Real> ComponentPrediction<R> {
    pub fn new(component: Section, p_scam: R, informed: bool, threshold: R) -> Self {
        let p_scam = p_scam.max(R::zero()).min(R::one());
        Self {
            component,
            p_scam,
            informed,
            nominal: if p_scam >= threshold {
                Label::Scam
            } else {
                Label::Real
            },
        }
    }

    pub fn base_rate(component: Section, rate: R, threshold: R) -> Self {
        Self::new(component, rate, false, threshold)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nominal_flips_exactly_at_the_threshold() {
        let at = ComponentPrediction::new(Section::Captions, 0.5, true, 0.5);
        assert_eq!(at.nominal, Label::Scam);
        let below = ComponentPrediction::new(Section::Captions, 0.5 - 1e-12, true, 0.5);
        assert_eq!(below.nominal, Label::Real);
    }

    #[test]
    fn probability_is_clamped_to_unit_interval() {
        let high = ComponentPrediction::new(Section::Demographics, 1.5, true, 0.5);
        assert_eq!(high.p_scam, 1.0);
        let low = ComponentPrediction::new(Section::Demographics, -0.5, true, 0.5);
        assert_eq!(low.p_scam, 0.0);
    }
}
