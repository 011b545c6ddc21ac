//! Synthetic corpus generation for tests and benchmarks: independent class
//! signal planted in each profile section, optional whole-section dropout,
//! and 'or'-valued records that explode into variant groups.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde_json::{json, Map, Value};

use crate::error::Result;
use crate::profile::{explode_or_values, LabelPolicy, Profile};

#[derive(Debug, Clone)]
pub struct SyntheticConfig {
    /// Raw records before 'or'-value explosion.
    pub records: usize,
    pub scam_rate: f64,
    /// Probability that a profile omits one randomly chosen section.
    pub missing_section_rate: f64,
    /// Probability that a scam record carries 'or'-valued fields.
    pub or_value_rate: f64,
    /// Probability that one present demographics field is dropped.
    pub missing_field_rate: f64,
    /// Strength in the unit interval of the planted class signal per section.
    pub signal: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            records: 2000,
            scam_rate: 0.3,
            missing_section_rate: 0.3,
            or_value_rate: 0.1,
            missing_field_rate: 0.15,
            signal: 0.8,
            seed: 0,
        }
    }
}

const SCAM_OCCUPATIONS: [&str; 6] = [
    "military officer",
    "army engineer",
    "model",
    "studant",
    "oil rig contractor",
    "doctor",
];
const REAL_OCCUPATIONS: [&str; 8] = [
    "retired",
    "teacher",
    "waiter",
    "nurse",
    "truck driver",
    "accountant",
    "farmer",
    "receptionist",
];
const SCAM_COUNTRIES: [&str; 3] = ["United States", "United Kingdom", "Germany"];
const REAL_COUNTRIES: [&str; 5] = ["Mexico", "Spain", "Canada", "France", "Brazil"];
const ETHNICITIES: [&str; 4] = ["white", "black", "hispanic", "asian"];
const SCAM_STATUS: [&str; 2] = ["widowed", "single"];
const REAL_STATUS: [&str; 4] = ["single", "married", "divorced", "separated"];

const SCAM_CAPTIONS: [&str; 6] = [
    "a man in a military uniform standing in front of a flag",
    "a man sitting in front of a laptop computer",
    "a man riding on the back of a brown horse",
    "a group of people posing for a picture",
    "a man in a suit holding a bouquet of flowers",
    "a woman sitting in a study room with a laptop",
];
const REAL_CAPTIONS: [&str; 6] = [
    "a man riding a bike down a street",
    "a woman walking a dog in a park",
    "a plate of pizza on a table",
    "a child playing with a ball in the grass",
    "a man standing in a boat in the water",
    "a woman holding a bottle of wine at a party",
];

const SCAM_PHRASES: [&str; 8] = [
    "Im a caring and loving man",
    "am here to find a good woman",
    "i will like to make friends",
    "contact me on my personal email",
    "i am honest caring and god fearing",
    "distance dont matter to love",
    "am just a simple man by name",
    "i promise to love you forever",
];
const REAL_PHRASES: [&str; 8] = [
    "I enjoy hiking and reading on weekends",
    "looking to meet someone nearby for coffee",
    "I work long hours but make time for friends",
    "big fan of live music and old movies",
    "my kids come first in my life",
    "just moved to the area and exploring",
    "I like cooking new recipes at home",
    "happy with my life and looking to share it",
];
const SCAM_TAGS: [&str; 5] = [
    "IP contradicts location",
    "Suspicious language use",
    "Known scammer picture",
    "Mass-mailing other users",
    "Self-contradictory profile",
];

fn pick<'a>(rng: &mut ChaCha20Rng, items: &[&'a str]) -> &'a str {
    items[rng.gen_range(0..items.len())]
}

/// Section dropped for a record, if any.
#[derive(Clone, Copy, PartialEq)]
enum Drop {
    None,
    Demographics,
    Captions,
    Descriptions,
}

/// A section follows its class's distributions with probability
/// 0.5 + signal/2, otherwise it mimics the other class. Sections flip
/// independently, so their signals stay independent.
fn follows_class_signal(rng: &mut ChaCha20Rng, scam: bool, signal: f64) -> bool {
    scam == rng.gen_bool(0.5 + signal / 2.0)
}

/// One raw record (pre-explosion JSON value).
fn generate_record(index: usize, cfg: &SyntheticConfig, rng: &mut ChaCha20Rng) -> Value {
    let scam = rng.gen_bool(cfg.scam_rate);

    let dropped = if rng.gen_bool(cfg.missing_section_rate) {
        match rng.gen_range(0..3) {
            0 => Drop::Demographics,
            1 => Drop::Captions,
            _ => Drop::Descriptions,
        }
    } else {
        Drop::None
    };

    let mut obj = Map::new();
    obj.insert("id".into(), json!(format!("p{index:06}")));
    obj.insert("scam".into(), json!(if scam { 1 } else { 0 }));

    if dropped != Drop::Demographics {
        let scam_like = follows_class_signal(rng, scam, cfg.signal);
        let female = rng.gen_bool(0.4);
        let age: i64 = if scam_like {
            if female {
                rng.gen_range(22..34)
            } else {
                rng.gen_range(46..62)
            }
        } else {
            rng.gen_range(30..55)
        };
        let occupation = if scam_like {
            pick(rng, &SCAM_OCCUPATIONS)
        } else {
            pick(rng, &REAL_OCCUPATIONS)
        };
        let country = if scam_like {
            pick(rng, &SCAM_COUNTRIES)
        } else {
            pick(rng, &REAL_COUNTRIES)
        };
        let status = if scam_like {
            pick(rng, &SCAM_STATUS)
        } else {
            pick(rng, &REAL_STATUS)
        };
        let (lat, lon) = if scam_like {
            (rng.gen_range(25.0..49.0), rng.gen_range(-125.0..-70.0))
        } else {
            (rng.gen_range(-40.0..60.0), rng.gen_range(-10.0..40.0))
        };

        obj.insert("gender".into(), json!(if female { "female" } else { "male" }));
        obj.insert("ethnicity".into(), json!(pick(rng, &ETHNICITIES)));
        obj.insert("country".into(), json!(country));
        obj.insert("status".into(), json!(status));
        obj.insert("latitude".into(), json!((lat * 10.0f64).round() / 10.0));
        obj.insert("longitude".into(), json!((lon * 10.0f64).round() / 10.0));

        let multi_valued = scam && rng.gen_bool(cfg.or_value_rate);
        if multi_valued {
            let alt_age = age + rng.gen_range(1..15);
            obj.insert("age".into(), json!([age.to_string(), alt_age.to_string()]));
            let alt_occ = if scam_like {
                pick(rng, &SCAM_OCCUPATIONS)
            } else {
                pick(rng, &REAL_OCCUPATIONS)
            };
            obj.insert("occupation".into(), json!([occupation, alt_occ]));
        } else {
            obj.insert("age".into(), json!(age.to_string()));
            obj.insert("occupation".into(), json!(occupation));
        }

        if rng.gen_bool(cfg.missing_field_rate) {
            let victim = ["age", "ethnicity", "status", "occupation"][rng.gen_range(0..4)];
            obj.remove(victim);
        }
    }

    if dropped != Drop::Captions {
        let scam_like = follows_class_signal(rng, scam, cfg.signal);
        let n_captions = rng.gen_range(1..=3);
        let pool: &[&str] = if scam_like { &SCAM_CAPTIONS } else { &REAL_CAPTIONS };
        let captions: Vec<&str> = (0..n_captions).map(|_| pick(rng, pool)).collect();
        obj.insert("captions".into(), json!(captions));
    }

    if dropped != Drop::Descriptions {
        let scam_like = follows_class_signal(rng, scam, cfg.signal);
        let pool: &[&str] = if scam_like { &SCAM_PHRASES } else { &REAL_PHRASES };
        let n_phrases = rng.gen_range(3..=7);
        let description: Vec<&str> = (0..n_phrases).map(|_| pick(rng, pool)).collect();
        obj.insert("description".into(), json!(description.join(". ")));
    }

    if scam {
        let n_tags = rng.gen_range(1..=3);
        let mut tags: Vec<&str> = Vec::new();
        for _ in 0..n_tags {
            let tag = pick(rng, &SCAM_TAGS);
            if !tags.contains(&tag) {
                tags.push(tag);
            }
        }
        obj.insert("tags".into(), json!(tags));
    }

    Value::Object(obj)
}

/// Raw records with 'or'-value lists, one JSON value per record.
pub fn generate_raw_records(cfg: &SyntheticConfig) -> Vec<Value> {
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    (0..cfg.records)
        .map(|i| generate_record(i, cfg, &mut rng))
        .collect()
}

/// Raw corpus as JSON-lines text.
pub fn raw_corpus_text(cfg: &SyntheticConfig) -> String {
    let mut out = String::new();
    for record in generate_raw_records(cfg) {
        out.push_str(&record.to_string());
        out.push('\n');
    }
    out
}

/// Post-explosion profiles, as cmd_ingest would produce them.
pub fn generate_profiles(cfg: &SyntheticConfig) -> Result<Vec<Profile>> {
    let mut profiles = Vec::new();
    for (i, record) in generate_raw_records(cfg).iter().enumerate() {
        profiles.extend(explode_or_values(record, i + 1, 64, LabelPolicy::Required)?);
    }
    Ok(profiles)
}
