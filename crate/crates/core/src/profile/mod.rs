//! Profile corpus handling: parsing, validation, 'or'-value explosion,
//! variant-grouped splits and folds.
//!
//! Corpora are JSON-lines, one profile object per line. Multi-valued raw
//! records ("age": ["30","50"]) are exploded into one profile per
//! combination; every variant keeps the originating record's id as its
//! `variant_group` so that splits and folds never separate them.

pub mod split;

use std::collections::BTreeSet;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

pub use split::{group_k_folds, split_dataset, DatasetSplit, FoldAssignment, SplitRatios};

/// Ground-truth class of a profile. Scam is the positive class throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Scam,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Male,
    Female,
}

/// One dating-site account as stored in the canonical corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub id: String,
    /// Origin-record identifier shared by all 'or'-explosion variants.
    /// Equals `id` for records that did not explode.
    pub variant_group: String,
    pub age: Option<u32>,
    pub gender: Option<Gender>,
    pub ethnicity: Option<String>,
    pub marital_status: Option<String>,
    pub occupation_raw: Option<String>,
    pub country: Option<String>,
    pub latitude: Option<f64>,
    pub longitude: Option<f64>,
    /// Pre-generated image captions, possibly empty.
    pub captions: Vec<String>,
    pub description: Option<String>,
    /// Present on every line of a labeled corpus; `None` only for
    /// prediction-time inputs loaded with [`LabelPolicy::Optional`].
    pub label: Option<Label>,
    /// Moderator justification tags (scam profiles only, may be empty).
    pub tags: Vec<String>,
}

impl Profile {
    pub fn is_scam(&self) -> bool {
        self.label == Some(Label::Scam)
    }

    /// Label of a profile loaded from a labeled corpus.
    pub fn known_label(&self) -> Label {
        self.label.expect("profile from a labeled corpus")
    }

    /// Serialize to the canonical corpus line format. Absent fields are
    /// omitted so that parse . serialize is the identity.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("id".into(), json!(self.id));
        if self.variant_group != self.id {
            obj.insert("variant_group".into(), json!(self.variant_group));
        }
        if let Some(label) = self.label {
            obj.insert("scam".into(), json!(if label == Label::Scam { 1 } else { 0 }));
        }
        if let Some(age) = self.age {
            obj.insert("age".into(), json!(age));
        }
        if let Some(g) = self.gender {
            obj.insert(
                "gender".into(),
                json!(match g {
                    Gender::Male => "male",
                    Gender::Female => "female",
                }),
            );
        }
        if let Some(v) = &self.ethnicity {
            obj.insert("ethnicity".into(), json!(v));
        }
        if let Some(v) = &self.marital_status {
            obj.insert("status".into(), json!(v));
        }
        if let Some(v) = &self.occupation_raw {
            obj.insert("occupation".into(), json!(v));
        }
        if let Some(v) = &self.country {
            obj.insert("country".into(), json!(v));
        }
        if let Some(v) = self.latitude {
            obj.insert("latitude".into(), json!(v));
        }
        if let Some(v) = self.longitude {
            obj.insert("longitude".into(), json!(v));
        }
        if !self.captions.is_empty() {
            obj.insert("captions".into(), json!(self.captions));
        }
        if let Some(v) = &self.description {
            obj.insert("description".into(), json!(v));
        }
        if !self.tags.is_empty() {
            obj.insert("tags".into(), json!(self.tags));
        }
        Value::Object(obj)
    }
}

/// Whether corpus lines must carry a label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelPolicy {
    /// Missing "scam" field is a schema error (training/evaluation corpora).
    Required,
    /// Missing "scam" field yields `label = None` (prediction inputs).
    Optional,
}

fn trimmed_string(v: &Value, line: usize, field: &str) -> Result<Option<String>> {
    match v {
        Value::Null => Ok(None),
        Value::String(s) => {
            let t = s.trim();
            Ok(if t.is_empty() { None } else { Some(t.to_string()) })
        }
        _ => Err(Error::schema(line, format!("field '{field}' must be a string"))),
    }
}

fn parse_age(v: &Value, line: usize) -> Result<Option<u32>> {
    let n = match v {
        Value::Null => return Ok(None),
        Value::Number(n) => n
            .as_i64()
            .ok_or_else(|| Error::schema(line, "non-integer age"))?,
        Value::String(s) => {
            let t = s.trim();
            if t.is_empty() {
                return Ok(None);
            }
            t.parse::<i64>()
                .map_err(|_| Error::schema(line, format!("non-numeric age '{t}'")))?
        }
        _ => return Err(Error::schema(line, "non-numeric age")),
    };
    if !(0..=150).contains(&n) {
        return Err(Error::schema(line, format!("age {n} out of range")));
    }
    Ok(Some(n as u32))
}

fn parse_coordinate(v: &Value, line: usize, field: &str, bound: f64) -> Result<Option<f64>> {
    let x = match v {
        Value::Null => return Ok(None),
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::schema(line, format!("non-numeric {field}")))?,
        Value::String(s) => {
            let t = s.trim();
            if t.is_empty() {
                return Ok(None);
            }
            t.parse::<f64>()
                .map_err(|_| Error::schema(line, format!("non-numeric {field} '{t}'")))?
        }
        _ => return Err(Error::schema(line, format!("non-numeric {field}"))),
    };
    if !x.is_finite() || x.abs() > bound {
        return Err(Error::schema(line, format!("{field} {x} out of range")));
    }
    Ok(Some(x))
}

fn parse_gender(v: &Value, line: usize) -> Result<Option<Gender>> {
    match trimmed_string(v, line, "gender")? {
        None => Ok(None),
        Some(s) => match s.to_lowercase().as_str() {
            "male" | "m" => Ok(Some(Gender::Male)),
            "female" | "f" => Ok(Some(Gender::Female)),
            other => Err(Error::schema(line, format!("unknown gender '{other}'"))),
        },
    }
}

fn parse_string_list(v: &Value, line: usize, field: &str) -> Result<Vec<String>> {
    match v {
        Value::Null => Ok(Vec::new()),
        Value::Array(items) => {
            let mut out = Vec::new();
            for item in items {
                if let Some(s) = trimmed_string(item, line, field)? {
                    out.push(s);
                }
            }
            Ok(out)
        }
        _ => Err(Error::schema(line, format!("field '{field}' must be a list"))),
    }
}

fn parse_label(obj: &Map<String, Value>, line: usize, policy: LabelPolicy) -> Result<Option<Label>> {
    let raw = obj.get("scam");
    let value = match raw {
        None | Some(Value::Null) => {
            return match policy {
                LabelPolicy::Required => Err(Error::schema(line, "missing required field 'scam'")),
                LabelPolicy::Optional => Ok(None),
            }
        }
        Some(v) => v,
    };
    let flag = match value {
        Value::Bool(b) => *b,
        Value::Number(n) => match n.as_i64() {
            Some(0) => false,
            Some(1) => true,
            _ => return Err(Error::schema(line, "field 'scam' must be 0 or 1")),
        },
        Value::String(s) => match s.trim() {
            "0" => false,
            "1" => true,
            _ => return Err(Error::schema(line, "field 'scam' must be 0 or 1")),
        },
        _ => return Err(Error::schema(line, "field 'scam' must be 0 or 1")),
    };
    Ok(Some(if flag { Label::Scam } else { Label::Real }))
}

/// Parse one canonical corpus object. Unknown keys are ignored, absent or
/// null keys become missing values.
pub fn parse_profile_value(obj: &Map<String, Value>, line: usize, policy: LabelPolicy) -> Result<Profile> {
    let id = match obj.get("id") {
        Some(v) => trimmed_string(v, line, "id")?
            .ok_or_else(|| Error::schema(line, "field 'id' must be non-empty"))?,
        None => return Err(Error::schema(line, "missing required field 'id'")),
    };
    let label = parse_label(obj, line, policy)?;
    let variant_group = match obj.get("variant_group") {
        Some(v) => trimmed_string(v, line, "variant_group")?.unwrap_or_else(|| id.clone()),
        None => id.clone(),
    };

    let null = Value::Null;
    let get = |k: &str| obj.get(k).unwrap_or(&null);

    let latitude = parse_coordinate(get("latitude"), line, "latitude", 90.0)?;
    let longitude = parse_coordinate(get("longitude"), line, "longitude", 180.0)?;
    if latitude.is_some() && longitude.is_none() {
        return Err(Error::schema(line, "latitude present without longitude"));
    }

    let mut tags = parse_string_list(get("tags"), line, "tags")?;
    for extra in parse_string_list(get("justifications"), line, "justifications")? {
        if !tags.contains(&extra) {
            tags.push(extra);
        }
    }

    // A "captions" list wins over raw "images" (which need the sidecar to
    // resolve, see ingest).
    let captions = parse_string_list(get("captions"), line, "captions")?;

    Ok(Profile {
        id,
        variant_group,
        age: parse_age(get("age"), line)?,
        gender: parse_gender(get("gender"), line)?,
        ethnicity: trimmed_string(get("ethnicity"), line, "ethnicity")?,
        marital_status: trimmed_string(get("status"), line, "status")?.map(|s| s.to_lowercase()),
        occupation_raw: trimmed_string(get("occupation"), line, "occupation")?,
        country: trimmed_string(get("country"), line, "country")?,
        latitude,
        longitude,
        captions,
        description: trimmed_string(get("description"), line, "description")?,
        label,
        tags,
    })
}

/// Parse one corpus line (label required).
pub fn parse_profile(line_text: &str) -> Result<Profile> {
    parse_profile_line(line_text, 1, LabelPolicy::Required)
}

pub fn parse_profile_line(line_text: &str, line: usize, policy: LabelPolicy) -> Result<Profile> {
    let value: Value = serde_json::from_str(line_text).map_err(|e| Error::Parse {
        line,
        message: e.to_string(),
    })?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::schema(line, "corpus line must be a JSON object"))?;
    parse_profile_value(obj, line, policy)
}

/// Load a canonical JSON-lines corpus, preserving line order. Blank lines
/// are skipped. Fails on the first malformed line.
pub fn load_corpus(path: impl AsRef<Path>, policy: LabelPolicy) -> Result<Vec<Profile>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut profiles = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        profiles.push(parse_profile_line(&line, idx + 1, policy)?);
    }
    Ok(profiles)
}

/// Lenient variant: bad lines are collected as (line number, error) instead
/// of aborting the load.
#[allow(clippy::type_complexity)]
pub fn load_corpus_lenient(
    path: impl AsRef<Path>,
    policy: LabelPolicy,
) -> Result<(Vec<Profile>, Vec<(usize, Error)>)> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut profiles = Vec::new();
    let mut bad = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_profile_line(&line, idx + 1, policy) {
            Ok(p) => profiles.push(p),
            Err(e) => bad.push((idx + 1, e)),
        }
    }
    Ok((profiles, bad))
}

/// Write profiles as canonical JSON-lines.
pub fn write_corpus(path: impl AsRef<Path>, profiles: &[Profile]) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for p in profiles {
        out.push_str(&p.to_json().to_string());
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Fields of a raw record that may carry 'or'-value lists of alternatives.
const EXPLODABLE_FIELDS: [&str; 9] = [
    "age",
    "gender",
    "ethnicity",
    "occupation",
    "status",
    "country",
    "latitude",
    "longitude",
    "description",
];

/// Expand a raw record's multi-valued fields into the Cartesian product of
/// single-valued profiles. Every output shares the record id as its
/// `variant_group`; a record with no multi-valued fields yields exactly one
/// profile with `variant_group == id`.
pub fn explode_or_values(
    raw: &Value,
    line: usize,
    cap: usize,
    policy: LabelPolicy,
) -> Result<Vec<Profile>> {
    let obj = raw
        .as_object()
        .ok_or_else(|| Error::schema(line, "corpus line must be a JSON object"))?;

    let mut alternatives: Vec<(&str, Vec<Value>)> = Vec::new();
    let mut product = 1usize;
    for field in EXPLODABLE_FIELDS {
        if let Some(Value::Array(options)) = obj.get(field) {
            if options.is_empty() {
                continue;
            }
            product = product.saturating_mul(options.len());
            alternatives.push((field, options.clone()));
        }
    }
    if product > cap {
        return Err(Error::ExplosionLimit { product, cap });
    }

    if alternatives.is_empty() {
        return Ok(vec![parse_profile_value(obj, line, policy)?]);
    }

    let base_id = match obj.get("id").and_then(Value::as_str) {
        Some(s) if !s.trim().is_empty() => s.trim().to_string(),
        _ => return Err(Error::schema(line, "missing required field 'id'")),
    };

    let mut variants = Vec::with_capacity(product);
    let mut odometer = vec![0usize; alternatives.len()];
    for k in 0..product {
        let mut combined = obj.clone();
        for (slot, (field, options)) in alternatives.iter().enumerate() {
            combined.insert((*field).to_string(), options[odometer[slot]].clone());
        }
        if product > 1 {
            combined.insert("id".into(), json!(format!("{base_id}#{}", k + 1)));
            combined.insert("variant_group".into(), json!(base_id));
        }
        variants.push(parse_profile_value(&combined, line, policy)?);

        // advance odometer, last field fastest
        for slot in (0..odometer.len()).rev() {
            odometer[slot] += 1;
            if odometer[slot] < alternatives[slot].1.len() {
                break;
            }
            odometer[slot] = 0;
        }
    }
    Ok(variants)
}

/// Distinct variant groups in first-appearance order.
pub fn variant_groups(profiles: &[Profile]) -> Vec<String> {
    let mut seen = BTreeSet::new();
    let mut groups = Vec::new();
    for p in profiles {
        if seen.insert(p.variant_group.clone()) {
            groups.push(p.variant_group.clone());
        }
    }
    groups
}
