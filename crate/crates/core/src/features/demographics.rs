//! Demographics section encoding: numeric features for age and coordinates,
//! one-hot categorical features for gender, country, ethnicity, occupation
//! area and marital status.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::profile::{Gender, Profile};
use crate::real::{real, Real};

use super::occupation::OccupationLexicon;
use super::{FeatureVector, Section};

/// Field names of the demographics section, in encoding order.
pub const DEMOGRAPHIC_FIELDS: [&str; 8] = [
    "age",
    "latitude",
    "longitude",
    "gender",
    "country",
    "ethnicity",
    "occupation",
    "status",
];

/// Reserved one-hot slot for categorical values unseen during fitting, so
/// every present field activates exactly one index.
pub const UNKNOWN_VALUE: &str = "<unk>";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Numeric,
    Categorical,
}

/// One demographics field within the flattened feature index space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldSpec {
    pub name: String,
    pub kind: FieldKind,
    /// First feature index of this field's block.
    pub offset: u32,
    /// Block width: 1 for numeric, number of one-hot slots for categorical.
    pub arity: u32,
}

/// Decoded per-field view of an encoded demographics vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldValue<R: Real> {
    Missing,
    Numeric(R),
    /// Active one-hot slot within the field's block.
    Category(u32),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DemographicsEncoder {
    lexicon: OccupationLexicon,
    /// Sorted known values per vocabulary-backed field.
    countries: Vec<String>,
    ethnicities: Vec<String>,
    statuses: Vec<String>,
    fields: Vec<FieldSpec>,
    dim: u32,
}

fn norm_value(raw: &str) -> String {
    raw.trim().to_lowercase()
}

fn collect_values(profiles: &[&Profile], get: impl Fn(&Profile) -> Option<&String>) -> Vec<String> {
    let mut set = BTreeSet::new();
    for p in profiles {
        if let Some(v) = get(p) {
            set.insert(norm_value(v));
        }
    }
    set.into_iter().collect()
}

impl DemographicsEncoder {
    /// Fit categorical vocabularies on training profiles.
    pub fn fit(profiles: &[&Profile], lexicon: OccupationLexicon) -> Self {
        let countries = collect_values(profiles, |p| p.country.as_ref());
        let ethnicities = collect_values(profiles, |p| p.ethnicity.as_ref());
        let statuses = collect_values(profiles, |p| p.marital_status.as_ref());

        let mut fields = Vec::new();
        let mut offset = 0u32;
        let mut push = |name: &str, kind: FieldKind, arity: u32, offset: &mut u32| {
            fields.push(FieldSpec {
                name: name.to_string(),
                kind,
                offset: *offset,
                arity,
            });
            *offset += arity;
        };
        push("age", FieldKind::Numeric, 1, &mut offset);
        push("latitude", FieldKind::Numeric, 1, &mut offset);
        push("longitude", FieldKind::Numeric, 1, &mut offset);
        push("gender", FieldKind::Categorical, 2, &mut offset);
        push(
            "country",
            FieldKind::Categorical,
            countries.len() as u32 + 1,
            &mut offset,
        );
        push(
            "ethnicity",
            FieldKind::Categorical,
            ethnicities.len() as u32 + 1,
            &mut offset,
        );
        push(
            "occupation",
            FieldKind::Categorical,
            lexicon.categories().len() as u32,
            &mut offset,
        );
        push(
            "status",
            FieldKind::Categorical,
            statuses.len() as u32 + 1,
            &mut offset,
        );

        Self {
            lexicon,
            countries,
            ethnicities,
            statuses,
            fields,
            dim: offset,
        }
    }

    pub fn fields(&self) -> &[FieldSpec] {
        &self.fields
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn lexicon(&self) -> &OccupationLexicon {
        &self.lexicon
    }

    fn field(&self, name: &str) -> &FieldSpec {
        self.fields
            .iter()
            .find(|f| f.name == name)
            .expect("known demographics field")
    }

    /// Slot of a value within a vocabulary-backed block; the last slot is
    /// reserved for unseen values.
    fn slot(values: &[String], raw: &str) -> u32 {
        values
            .binary_search(&norm_value(raw))
            .map(|i| i as u32)
            .unwrap_or(values.len() as u32)
    }

    /// Encode the demographics section of a profile.
    pub fn encode<R: Real>(&self, p: &Profile) -> FeatureVector<R> {
        let mut entries: Vec<(u32, R)> = Vec::new();
        let mut missing = BTreeSet::new();

        match p.age {
            Some(age) => entries.push((self.field("age").offset, real(age as f64))),
            None => {
                missing.insert("age".to_string());
            }
        }
        match p.latitude {
            Some(lat) => entries.push((self.field("latitude").offset, real(lat))),
            None => {
                missing.insert("latitude".to_string());
            }
        }
        match p.longitude {
            Some(lon) => entries.push((self.field("longitude").offset, real(lon))),
            None => {
                missing.insert("longitude".to_string());
            }
        }
        match p.gender {
            Some(g) => {
                let slot = match g {
                    Gender::Male => 0,
                    Gender::Female => 1,
                };
                entries.push((self.field("gender").offset + slot, R::one()));
            }
            None => {
                missing.insert("gender".to_string());
            }
        }
        match &p.country {
            Some(c) => {
                let spec = self.field("country");
                entries.push((spec.offset + Self::slot(&self.countries, c), R::one()));
            }
            None => {
                missing.insert("country".to_string());
            }
        }
        match &p.ethnicity {
            Some(e) => {
                let spec = self.field("ethnicity");
                entries.push((spec.offset + Self::slot(&self.ethnicities, e), R::one()));
            }
            None => {
                missing.insert("ethnicity".to_string());
            }
        }
        match &p.occupation_raw {
            Some(o) => {
                let spec = self.field("occupation");
                let category = self.lexicon.normalize_occupation(o);
                let idx = self
                    .lexicon
                    .category_index(category)
                    .expect("normalized category exists") as u32;
                entries.push((spec.offset + idx, R::one()));
            }
            None => {
                missing.insert("occupation".to_string());
            }
        }
        match &p.marital_status {
            Some(s) => {
                let spec = self.field("status");
                entries.push((spec.offset + Self::slot(&self.statuses, s), R::one()));
            }
            None => {
                missing.insert("status".to_string());
            }
        }

        entries.sort_by_key(|&(i, _)| i);
        let present = missing.len() < DEMOGRAPHIC_FIELDS.len();
        FeatureVector {
            section: Section::Demographics,
            entries,
            missing,
            present,
        }
    }

    /// Per-field view of an encoded vector.
    pub fn decode<R: Real>(&self, v: &FeatureVector<R>) -> Vec<FieldValue<R>> {
        self.fields
            .iter()
            .map(|spec| {
                if v.missing.contains(&spec.name) {
                    return FieldValue::Missing;
                }
                match spec.kind {
                    FieldKind::Numeric => match v.value(spec.offset) {
                        Some(x) => FieldValue::Numeric(x),
                        None => FieldValue::Missing,
                    },
                    FieldKind::Categorical => {
                        for slot in 0..spec.arity {
                            if let Some(x) = v.value(spec.offset + slot) {
                                if x > R::zero() {
                                    return FieldValue::Category(slot);
                                }
                            }
                        }
                        FieldValue::Missing
                    }
                }
            })
            .collect()
    }

    /// Dense row for tree-based models.
    pub fn to_dense<R: Real>(&self, v: &FeatureVector<R>) -> Vec<R> {
        let mut row = vec![R::zero(); self.dim as usize];
        for &(i, x) in &v.entries {
            row[i as usize] = x;
        }
        row
    }

    /// Map a flat feature index back to its field name.
    pub fn field_of_index(&self, index: u32) -> &str {
        for spec in &self.fields {
            if index >= spec.offset && index < spec.offset + spec.arity {
                return &spec.name;
            }
        }
        "?"
    }

    /// Human-readable name of a one-hot slot, for feature reports.
    pub fn describe_index(&self, index: u32) -> String {
        for spec in &self.fields {
            if index < spec.offset || index >= spec.offset + spec.arity {
                continue;
            }
            let slot = index - spec.offset;
            let value = match spec.name.as_str() {
                "gender" => Some(if slot == 0 { "male".into() } else { "female".into() }),
                "country" => Some(Self::slot_name(&self.countries, slot)),
                "ethnicity" => Some(Self::slot_name(&self.ethnicities, slot)),
                "status" => Some(Self::slot_name(&self.statuses, slot)),
                "occupation" => Some(self.lexicon.categories()[slot as usize].clone()),
                _ => None,
            };
            return match value {
                Some(v) => format!("{}={}", spec.name, v),
                None => spec.name.clone(),
            };
        }
        format!("feature_{index}")
    }

    fn slot_name(values: &[String], slot: u32) -> String {
        values
            .get(slot as usize)
            .cloned()
            .unwrap_or_else(|| UNKNOWN_VALUE.to_string())
    }
}

/// Per-class value frequency tables, used by reporting.
pub fn frequency_table(values: &[&str]) -> BTreeMap<String, usize> {
    let mut map = BTreeMap::new();
    for v in values {
        *map.entry(norm_value(v)).or_insert(0) += 1;
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::parse_profile;

    fn profile(json: &str) -> Profile {
        parse_profile(json).unwrap()
    }

    fn fit_on(profiles: &[Profile]) -> DemographicsEncoder {
        let refs: Vec<&Profile> = profiles.iter().collect();
        DemographicsEncoder::fit(&refs, OccupationLexicon::default_lexicon())
    }

    #[test]
    fn encodes_paper_true_positive_example() {
        let train = vec![
            profile(r#"{"id":"t1","scam":0,"ethnicity":"white","country":"Mexico","status":"single"}"#),
            profile(r#"{"id":"t2","scam":1,"ethnicity":"black","country":"United States","status":"widowed"}"#),
        ];
        let enc = fit_on(&train);
        let p = profile(
            r#"{"id":"a1","scam":1,"age":26,"gender":"female","ethnicity":"black","occupation":"studant"}"#,
        );
        let v: FeatureVector<f64> = enc.encode(&p);
        assert!(v.present);
        assert_eq!(v.value(0), Some(26.0)); // age slot
        let missing: Vec<&str> = v.missing.iter().map(|s| s.as_str()).collect();
        assert_eq!(missing, vec!["country", "latitude", "longitude", "status"]);
        // occupation normalized through the fuzzy lexicon
        let occ = enc.field("occupation");
        let student = enc.lexicon.category_index("student").unwrap() as u32;
        assert_eq!(v.value(occ.offset + student), Some(1.0));
        // decoded view agrees
        let decoded = enc.decode(&v);
        assert_eq!(decoded[0], FieldValue::Numeric(26.0));
        assert_eq!(decoded[1], FieldValue::Missing);
    }

    #[test]
    fn all_fields_missing_means_section_absent() {
        let train = vec![profile(r#"{"id":"t1","scam":0,"age":30}"#)];
        let enc = fit_on(&train);
        let p = profile(r#"{"id":"x","scam":0}"#);
        let v: FeatureVector<f64> = enc.encode(&p);
        assert!(!v.present);
        assert!(v.entries.is_empty());
        assert_eq!(v.missing.len(), 8);
    }

    #[test]
    fn exactly_one_active_slot_per_present_categorical() {
        let train = vec![
            profile(r#"{"id":"t1","scam":0,"country":"Spain","ethnicity":"hispanic","status":"single"}"#),
        ];
        let enc = fit_on(&train);
        // unseen country falls into the reserved unknown slot
        let p = profile(
            r#"{"id":"x","scam":1,"gender":"male","country":"Atlantis","ethnicity":"hispanic","occupation":"pilot","status":"married"}"#,
        );
        let v: FeatureVector<f64> = enc.encode(&p);
        for spec in enc.fields() {
            if spec.kind != FieldKind::Categorical || v.missing.contains(&spec.name) {
                continue;
            }
            let active = (spec.offset..spec.offset + spec.arity)
                .filter(|&i| v.value(i).is_some_and(|x| x > 0.0))
                .count();
            assert_eq!(active, 1, "field {}", spec.name);
        }
    }

    #[test]
    fn zero_longitude_is_still_an_explicit_entry() {
        let train = vec![profile(r#"{"id":"t1","scam":0}"#)];
        let enc = fit_on(&train);
        let p = profile(r#"{"id":"x","scam":0,"latitude":51.5,"longitude":0.0}"#);
        let v: FeatureVector<f64> = enc.encode(&p);
        assert_eq!(v.value(enc.field("longitude").offset), Some(0.0));
        assert!(!v.missing.contains("longitude"));
    }
}
