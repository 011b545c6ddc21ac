//! Report structures: the results table, per-tag recall, corpus statistics
//! and feature rankings, each serializable as JSON and renderable as an
//! aligned plain-text table.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::features::OccupationLexicon;
use crate::profile::{Gender, Label, Profile};
use crate::real::{to_f64, Real};

use super::metrics::{ConfusionMatrix, Metrics};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ModelRow<R: Real> {
    pub name: String,
    pub cm: ConfusionMatrix,
    pub metrics: Metrics<R>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct RocReport<R: Real> {
    pub points: Vec<(R, R)>,
    pub auc: R,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TagRecall {
    pub tag: String,
    pub count: usize,
    pub recall: f64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FeatureRankings {
    /// Per-field impurity decrease of the demographics forest, descending.
    pub demographics: Vec<(String, f64)>,
    /// Top bigrams weighted toward scam descriptions.
    pub scam_bigrams: Vec<(String, f64)>,
    /// Top bigrams weighted toward real descriptions.
    pub real_bigrams: Vec<(String, f64)>,
    /// Caption keywords weighted toward scam profiles.
    pub scam_caption_keywords: Vec<(String, f64)>,
    /// Caption keywords weighted toward real profiles.
    pub real_caption_keywords: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct EvaluationReport<R: Real> {
    pub rows: Vec<ModelRow<R>>,
    pub roc: Option<RocReport<R>>,
    pub tag_recall: Option<Vec<TagRecall>>,
    pub rankings: Option<FeatureRankings>,
}

impl<R: Real> EvaluationReport<R> {
    /// Results table in the familiar layout, one row per model.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<16} {:>6} {:>6} {:>6} {:>6} {:>7} {:>7} {:>7} {:>7}\n",
            "classifier", "tn", "fn", "fp", "tp", "prec.", "rec.", "f1", "acc"
        ));
        for row in &self.rows {
            out.push_str(&format!(
                "{:<16} {:>6} {:>6} {:>6} {:>6} {:>7.3} {:>7.3} {:>7.3} {:>7.3}\n",
                row.name,
                row.cm.tn,
                row.cm.fn_,
                row.cm.fp,
                row.cm.tp,
                to_f64(row.metrics.precision),
                to_f64(row.metrics.recall),
                to_f64(row.metrics.f1),
                to_f64(row.metrics.accuracy),
            ));
        }
        if let Some(roc) = &self.roc {
            out.push_str(&format!("\nensemble AUC: {:.4}\n", to_f64(roc.auc)));
        }
        out
    }

    pub fn roc_csv(&self) -> Option<String> {
        self.roc.as_ref().map(|roc| {
            let mut csv = String::from("fpr,tpr\n");
            for &(fpr, tpr) in &roc.points {
                csv.push_str(&format!("{},{}\n", to_f64(fpr), to_f64(tpr)));
            }
            csv
        })
    }
}

/// Recall per moderator justification tag among scam profiles carrying it.
/// `predicted_scam` aligns with `profiles`. Tags that appear on no profile
/// are omitted; rows are sorted by count descending then tag.
pub fn recall_by_tag(profiles: &[&Profile], predicted_scam: &[bool]) -> Vec<TagRecall> {
    assert_eq!(profiles.len(), predicted_scam.len());
    let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for (p, &caught) in profiles.iter().zip(predicted_scam) {
        if p.label != Some(Label::Scam) {
            continue;
        }
        for tag in &p.tags {
            let entry = counts.entry(tag.as_str()).or_insert((0, 0));
            entry.0 += 1;
            if caught {
                entry.1 += 1;
            }
        }
    }
    let mut rows: Vec<TagRecall> = counts
        .into_iter()
        .map(|(tag, (count, caught))| TagRecall {
            tag: tag.to_string(),
            count,
            recall: caught as f64 / count as f64,
        })
        .collect();
    rows.sort_by(|a, b| b.count.cmp(&a.count).then(a.tag.cmp(&b.tag)));
    rows
}

pub fn render_tag_table(rows: &[TagRecall]) -> String {
    let mut out = format!("{:<40} {:>8} {:>8}\n", "reason", "count", "rec.");
    for row in rows {
        out.push_str(&format!(
            "{:<40} {:>8} {:>8.2}\n",
            row.tag, row.count, row.recall
        ));
    }
    out
}

/// Per-class corpus statistics.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ClassStats {
    pub profiles: usize,
    pub male_share: f64,
    pub female_share: f64,
    pub mean_age_male: Option<f64>,
    pub mean_age_female: Option<f64>,
    pub ethnicity: BTreeMap<String, f64>,
    pub status: BTreeMap<String, f64>,
    /// Occupation areas after lexicon normalization, by presented gender.
    pub occupation_male: BTreeMap<String, f64>,
    pub occupation_female: BTreeMap<String, f64>,
    pub mean_description_words: Option<f64>,
    pub with_description: usize,
    pub mean_captions_per_profile: f64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CorpusStats {
    pub total: usize,
    pub scam: ClassStats,
    pub real: ClassStats,
}

fn class_stats(profiles: &[&Profile], lexicon: &OccupationLexicon) -> ClassStats {
    let n = profiles.len();
    let mut stats = ClassStats {
        profiles: n,
        ..Default::default()
    };
    if n == 0 {
        return stats;
    }

    let mut males = 0usize;
    let mut females = 0usize;
    let mut age_sum = [0.0f64; 2];
    let mut age_n = [0usize; 2];
    let mut ethnicity: BTreeMap<String, usize> = BTreeMap::new();
    let mut status: BTreeMap<String, usize> = BTreeMap::new();
    let mut occupation: [BTreeMap<String, usize>; 2] = [BTreeMap::new(), BTreeMap::new()];
    let mut occupation_n = [0usize; 2];
    let mut word_sum = 0usize;
    let mut caption_sum = 0usize;

    for p in profiles {
        let g = match p.gender {
            Some(Gender::Male) => {
                males += 1;
                Some(0)
            }
            Some(Gender::Female) => {
                females += 1;
                Some(1)
            }
            None => None,
        };
        if let (Some(gi), Some(age)) = (g, p.age) {
            age_sum[gi] += age as f64;
            age_n[gi] += 1;
        }
        if let Some(e) = &p.ethnicity {
            *ethnicity.entry(e.to_lowercase()).or_insert(0) += 1;
        }
        if let Some(s) = &p.marital_status {
            *status.entry(s.clone()).or_insert(0) += 1;
        }
        if let (Some(gi), Some(o)) = (g, &p.occupation_raw) {
            let area = lexicon.normalize_occupation(o).to_string();
            *occupation[gi].entry(area).or_insert(0) += 1;
            occupation_n[gi] += 1;
        }
        if let Some(d) = &p.description {
            word_sum += d.split_whitespace().count();
            stats.with_description += 1;
        }
        caption_sum += p.captions.len();
    }

    let share = |count: usize, total: usize| {
        if total == 0 {
            0.0
        } else {
            count as f64 / total as f64
        }
    };
    stats.male_share = share(males, males + females);
    stats.female_share = share(females, males + females);
    stats.mean_age_male = (age_n[0] > 0).then(|| age_sum[0] / age_n[0] as f64);
    stats.mean_age_female = (age_n[1] > 0).then(|| age_sum[1] / age_n[1] as f64);
    let frequencies = |m: BTreeMap<String, usize>, total: usize| {
        m.into_iter()
            .map(|(k, v)| (k, share(v, total)))
            .collect::<BTreeMap<String, f64>>()
    };
    let eth_total: usize = ethnicity.values().sum();
    stats.ethnicity = frequencies(ethnicity, eth_total);
    let status_total: usize = status.values().sum();
    stats.status = frequencies(status, status_total);
    stats.occupation_male = frequencies(occupation[0].clone(), occupation_n[0]);
    stats.occupation_female = frequencies(occupation[1].clone(), occupation_n[1]);
    stats.mean_description_words =
        (stats.with_description > 0).then(|| word_sum as f64 / stats.with_description as f64);
    stats.mean_captions_per_profile = caption_sum as f64 / n as f64;
    stats
}

/// Corpus statistics report: per-class demographic distributions, word
/// counts and captions-per-profile. Empty corpora produce an empty report.
pub fn corpus_stats(profiles: &[Profile], lexicon: &OccupationLexicon) -> CorpusStats {
    let scam: Vec<&Profile> = profiles.iter().filter(|p| p.is_scam()).collect();
    let real: Vec<&Profile> = profiles.iter().filter(|p| !p.is_scam()).collect();
    CorpusStats {
        total: profiles.len(),
        scam: class_stats(&scam, lexicon),
        real: class_stats(&real, lexicon),
    }
}

fn render_frequency_block(out: &mut String, title: &str, map: &BTreeMap<String, f64>, top: usize) {
    if map.is_empty() {
        return;
    }
    let mut rows: Vec<(&String, &f64)> = map.iter().collect();
    rows.sort_by(|a, b| b.1.partial_cmp(a.1).unwrap().then(a.0.cmp(b.0)));
    out.push_str(&format!("  {title}:\n"));
    for (name, freq) in rows.into_iter().take(top) {
        out.push_str(&format!("    {name:<24} {freq:.2}\n"));
    }
}

pub fn render_corpus_stats(stats: &CorpusStats) -> String {
    let mut out = format!("profiles: {}\n", stats.total);
    for (name, class) in [("scam", &stats.scam), ("real", &stats.real)] {
        out.push_str(&format!(
            "\n[{name}] n={} male={:.2} female={:.2}\n",
            class.profiles, class.male_share, class.female_share
        ));
        if let Some(age) = class.mean_age_male {
            out.push_str(&format!("  mean age (male):   {age:.1}\n"));
        }
        if let Some(age) = class.mean_age_female {
            out.push_str(&format!("  mean age (female): {age:.1}\n"));
        }
        if let Some(words) = class.mean_description_words {
            out.push_str(&format!(
                "  mean description words: {words:.1} ({} with description)\n",
                class.with_description
            ));
        }
        out.push_str(&format!(
            "  captions per profile: {:.2}\n",
            class.mean_captions_per_profile
        ));
        render_frequency_block(&mut out, "top occupations (male)", &class.occupation_male, 10);
        render_frequency_block(
            &mut out,
            "top occupations (female)",
            &class.occupation_female,
            10,
        );
        render_frequency_block(&mut out, "ethnicity", &class.ethnicity, 8);
        render_frequency_block(&mut out, "marital status", &class.status, 8);
    }
    out
}

pub fn render_rankings(rankings: &FeatureRankings) -> String {
    let mut out = String::new();
    if !rankings.demographics.is_empty() {
        out.push_str("demographics (impurity decrease):\n");
        for (feature, purity) in &rankings.demographics {
            out.push_str(&format!("  {feature:<16} {purity:>10.2}\n"));
        }
    }
    let block = |out: &mut String, title: &str, rows: &[(String, f64)]| {
        if rows.is_empty() {
            return;
        }
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&format!("{title}:\n"));
        for (term, weight) in rows {
            out.push_str(&format!("  {term:<24} {weight:>9.4}\n"));
        }
    };
    block(&mut out, "top scam bigrams", &rankings.scam_bigrams);
    block(&mut out, "top real bigrams", &rankings.real_bigrams);
    block(
        &mut out,
        "top scam caption keywords",
        &rankings.scam_caption_keywords,
    );
    block(
        &mut out,
        "top real caption keywords",
        &rankings.real_caption_keywords,
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::parse_profile;

    fn corpus() -> Vec<Profile> {
        [
            r#"{"id":"s1","scam":1,"gender":"male","age":50,"occupation":"army officer","ethnicity":"white","status":"widowed","description":"I am a caring man","tags":["IP contradicts location","Mass-mailing"]}"#,
            r#"{"id":"s2","scam":1,"gender":"female","age":30,"occupation":"student","description":"great friendship","captions":["a woman sitting on a bench"],"tags":["IP contradicts location"]}"#,
            r#"{"id":"r1","scam":0,"gender":"male","age":44,"occupation":"retired","ethnicity":"hispanic","status":"single","captions":["a man riding a bike","a man on a boat"]}"#,
            r#"{"id":"r2","scam":0,"gender":"female","age":44,"occupation":"teacher","description":"I like reading books and music"}"#,
        ]
        .iter()
        .map(|l| parse_profile(l).unwrap())
        .collect()
    }

    #[test]
    fn tag_recall_counts_and_rates() {
        let profiles = corpus();
        let refs: Vec<&Profile> = profiles.iter().collect();
        // s1 caught, s2 missed
        let rows = recall_by_tag(&refs, &[true, false, false, false]);
        assert_eq!(rows[0].tag, "IP contradicts location");
        assert_eq!(rows[0].count, 2);
        assert!((rows[0].recall - 0.5).abs() < 1e-12);
        let mass = rows.iter().find(|r| r.tag == "Mass-mailing").unwrap();
        assert_eq!(mass.count, 1);
        assert_eq!(mass.recall, 1.0);
    }

    #[test]
    fn tag_on_single_caught_profile_has_unit_recall() {
        let profiles = corpus();
        let refs: Vec<&Profile> = profiles.iter().collect();
        let rows = recall_by_tag(&refs, &[true, true, false, false]);
        assert!(rows.iter().all(|r| r.recall == 1.0));
    }

    #[test]
    fn empty_corpus_stats_do_not_error() {
        let stats = corpus_stats(&[], &OccupationLexicon::default_lexicon());
        assert_eq!(stats.total, 0);
        assert_eq!(stats.scam.profiles, 0);
        let text = render_corpus_stats(&stats);
        assert!(text.contains("profiles: 0"));
    }

    #[test]
    fn corpus_stats_track_words_and_captions() {
        let profiles = corpus();
        let stats = corpus_stats(&profiles, &OccupationLexicon::default_lexicon());
        assert_eq!(stats.total, 4);
        assert_eq!(stats.scam.profiles, 2);
        // scam descriptions: 5 words and 2 words -> mean 3.5
        assert!((stats.scam.mean_description_words.unwrap() - 3.5).abs() < 1e-12);
        assert!((stats.real.mean_captions_per_profile - 1.0).abs() < 1e-12);
        let military = stats.scam.occupation_male.get("military").unwrap();
        assert!((military - 1.0).abs() < 1e-12);
    }

    #[test]
    fn table_renders_all_rows() {
        let cm = ConfusionMatrix::new(2834, 78, 40, 1021);
        let report = EvaluationReport::<f64> {
            rows: vec![ModelRow {
                name: "weighted-vote".into(),
                cm,
                metrics: super::super::metrics::metrics(&cm).unwrap(),
            }],
            roc: None,
            tag_recall: None,
            rankings: None,
        };
        let table = report.render_table();
        assert!(table.contains("weighted-vote"));
        assert!(table.contains("0.945"));
    }
}
