//! Model-bundle persistence: one JSON snapshot per model plus TSV
//! vocabularies, cross-linked by SHA-256 hashes. A model refuses to load
//! against a vocabulary file that no longer matches the one it was trained
//! with, and the ensemble refuses to load against modified component files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classifiers::{CaptionsComponent, DemographicsComponent, DescriptionsComponent};
use crate::config::RunConfig;
use crate::ensemble::{EnsembleModel, SingleClassifier};
use crate::error::{Error, Result};
use crate::eval::CvSummary;
use crate::pipeline::{SplitIds, TrainedBundle};
use crate::profile::{write_corpus, DatasetSplit};
use crate::similarity::SimilarityBaseline;
use crate::Scalar;

pub const FORMAT_VERSION: u32 = 1;

pub const CONFIG_FILE: &str = "config.json";
pub const SPLITS_FILE: &str = "splits.json";
pub const VOCAB_CAPTIONS_FILE: &str = "vocab_captions.tsv";
pub const VOCAB_DESCRIPTIONS_FILE: &str = "vocab_descriptions.tsv";
pub const MODEL_DEMOGRAPHICS_FILE: &str = "model_demographics.json";
pub const MODEL_CAPTIONS_FILE: &str = "model_captions.json";
pub const MODEL_DESCRIPTIONS_FILE: &str = "model_descriptions.json";
pub const MODEL_SINGLE_FILE: &str = "model_single.json";
pub const SIMILARITY_FILE: &str = "similarity.json";
pub const ENSEMBLE_FILE: &str = "ensemble.json";
pub const CV_TRAIN_FILE: &str = "cv_train.json";
pub const CV_ENSEMBLE_FILE: &str = "cv_ensemble.json";
pub const MANIFEST_FILE: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Versioned wrapper for every persisted model.
#[derive(Debug, Serialize, Deserialize)]
struct ModelFile<T> {
    format: u32,
    /// Hash of the vocabulary/encoder this model is bound to.
    vocab_hash: String,
    model: T,
}

#[derive(Debug, Serialize, Deserialize)]
struct EnsembleFile {
    format: u32,
    /// Hashes of the component model files this stacker was built over.
    component_hashes: BTreeMap<String, String>,
    model: EnsembleModel<Scalar>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    format: u32,
    seed: u64,
    /// SHA-256 per bundle file.
    files: BTreeMap<String, String>,
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<String> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    Ok(sha256_hex(bytes))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Bundle(format!("serialize {name}: {e}")))?;
    text.push('\n');
    write_file(dir, name, text.as_bytes())
}

fn read_bytes(dir: &Path, name: &str) -> Result<(Vec<u8>, String)> {
    let path = dir.join(name);
    let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
    let hash = sha256_hex(&bytes);
    Ok((bytes, hash))
}

fn read_json<T: DeserializeOwned>(dir: &Path, name: &str) -> Result<(T, String)> {
    let (bytes, hash) = read_bytes(dir, name)?;
    let value = serde_json::from_slice(&bytes)
        .map_err(|e| Error::Bundle(format!("parse {name}: {e}")))?;
    Ok((value, hash))
}

fn check_format(format: u32, name: &str) -> Result<()> {
    if format != FORMAT_VERSION {
        return Err(Error::Bundle(format!(
            "{name}: format {format} unsupported (expected {FORMAT_VERSION})"
        )));
    }
    Ok(())
}

fn encoder_hash<T: Serialize>(encoder: &T) -> Result<String> {
    let text = serde_json::to_string(encoder)
        .map_err(|e| Error::Bundle(format!("hash encoder: {e}")))?;
    Ok(sha256_hex(text.as_bytes()))
}

/// Persist a trained bundle into `dir` (created if needed) and return the
/// manifest's file-hash map.
pub fn save(dir: impl AsRef<Path>, bundle: &TrainedBundle) -> Result<BTreeMap<String, String>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files: BTreeMap<String, String> = BTreeMap::new();

    files.insert(
        CONFIG_FILE.into(),
        write_json(dir, CONFIG_FILE, &bundle.config)?,
    );
    files.insert(
        SPLITS_FILE.into(),
        write_json(dir, SPLITS_FILE, &bundle.splits)?,
    );

    let captions_tsv = bundle.captions.encoder.vocab.to_tsv();
    files.insert(
        VOCAB_CAPTIONS_FILE.into(),
        write_file(dir, VOCAB_CAPTIONS_FILE, captions_tsv.as_bytes())?,
    );
    let descriptions_tsv = bundle.descriptions.encoder.vocab.to_tsv();
    files.insert(
        VOCAB_DESCRIPTIONS_FILE.into(),
        write_file(dir, VOCAB_DESCRIPTIONS_FILE, descriptions_tsv.as_bytes())?,
    );

    files.insert(
        MODEL_DEMOGRAPHICS_FILE.into(),
        write_json(
            dir,
            MODEL_DEMOGRAPHICS_FILE,
            &ModelFile {
                format: FORMAT_VERSION,
                vocab_hash: encoder_hash(&bundle.demographics.encoder)?,
                model: &bundle.demographics,
            },
        )?,
    );
    files.insert(
        MODEL_CAPTIONS_FILE.into(),
        write_json(
            dir,
            MODEL_CAPTIONS_FILE,
            &ModelFile {
                format: FORMAT_VERSION,
                vocab_hash: sha256_hex(captions_tsv.as_bytes()),
                model: &bundle.captions,
            },
        )?,
    );
    files.insert(
        MODEL_DESCRIPTIONS_FILE.into(),
        write_json(
            dir,
            MODEL_DESCRIPTIONS_FILE,
            &ModelFile {
                format: FORMAT_VERSION,
                vocab_hash: sha256_hex(descriptions_tsv.as_bytes()),
                model: &bundle.descriptions,
            },
        )?,
    );
    if let Some(single) = &bundle.single {
        files.insert(
            MODEL_SINGLE_FILE.into(),
            write_json(
                dir,
                MODEL_SINGLE_FILE,
                &ModelFile {
                    format: FORMAT_VERSION,
                    vocab_hash: encoder_hash(&(
                        &single.demographics,
                        &single.captions,
                        &single.descriptions,
                    ))?,
                    model: single,
                },
            )?,
        );
    }
    files.insert(
        SIMILARITY_FILE.into(),
        write_json(dir, SIMILARITY_FILE, &bundle.similarity)?,
    );

    if let Some(ensemble) = &bundle.ensemble {
        let mut component_hashes = BTreeMap::new();
        for name in [
            MODEL_DEMOGRAPHICS_FILE,
            MODEL_CAPTIONS_FILE,
            MODEL_DESCRIPTIONS_FILE,
        ] {
            component_hashes.insert(name.to_string(), files[name].clone());
        }
        files.insert(
            ENSEMBLE_FILE.into(),
            write_json(
                dir,
                ENSEMBLE_FILE,
                &EnsembleFile {
                    format: FORMAT_VERSION,
                    component_hashes,
                    model: ensemble.clone(),
                },
            )?,
        );
    }

    files.insert(
        CV_TRAIN_FILE.into(),
        write_json(dir, CV_TRAIN_FILE, &bundle.cv_train)?,
    );
    if let Some(cv) = &bundle.cv_test_ensemble {
        files.insert(CV_ENSEMBLE_FILE.into(), write_json(dir, CV_ENSEMBLE_FILE, cv)?);
    }

    let manifest = Manifest {
        format: FORMAT_VERSION,
        seed: bundle.splits.seed,
        files: files.clone(),
    };
    write_json(dir, MANIFEST_FILE, &manifest)?;
    Ok(files)
}

/// Write the three partitions as JSON-lines next to the bundle.
pub fn save_split_files(dir: impl AsRef<Path>, split: &DatasetSplit) -> Result<PathBuf> {
    let dir = dir.as_ref().join("splits");
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    write_corpus(dir.join("train.jsonl"), &split.train)?;
    write_corpus(dir.join("test.jsonl"), &split.test)?;
    write_corpus(dir.join("validation.jsonl"), &split.validation)?;
    Ok(dir)
}

fn verify_vocab_hash(name: &str, recorded: &str, actual: &str) -> Result<()> {
    if recorded != actual {
        return Err(Error::VocabHashMismatch {
            expected: recorded.to_string(),
            got: format!("{actual} ({name})"),
        });
    }
    Ok(())
}

/// Load a bundle, verifying vocabulary and component hashes.
pub fn load(dir: impl AsRef<Path>) -> Result<TrainedBundle> {
    let dir = dir.as_ref();
    let (config, _): (RunConfig, _) = read_json(dir, CONFIG_FILE)?;
    let (splits, _): (SplitIds, _) = read_json(dir, SPLITS_FILE)?;

    let (captions_tsv, captions_tsv_hash) = read_bytes(dir, VOCAB_CAPTIONS_FILE)?;
    let (descriptions_tsv, descriptions_tsv_hash) = read_bytes(dir, VOCAB_DESCRIPTIONS_FILE)?;

    let (demographics_file, demographics_hash): (ModelFile<DemographicsComponent<Scalar>>, _) =
        read_json(dir, MODEL_DEMOGRAPHICS_FILE)?;
    check_format(demographics_file.format, MODEL_DEMOGRAPHICS_FILE)?;
    verify_vocab_hash(
        MODEL_DEMOGRAPHICS_FILE,
        &demographics_file.vocab_hash,
        &encoder_hash(&demographics_file.model.encoder)?,
    )?;

    let (captions_file, captions_hash): (ModelFile<CaptionsComponent<Scalar>>, _) =
        read_json(dir, MODEL_CAPTIONS_FILE)?;
    check_format(captions_file.format, MODEL_CAPTIONS_FILE)?;
    verify_vocab_hash(VOCAB_CAPTIONS_FILE, &captions_file.vocab_hash, &captions_tsv_hash)?;
    let embedded = captions_file.model.encoder.vocab.to_tsv();
    verify_vocab_hash(
        MODEL_CAPTIONS_FILE,
        &captions_file.vocab_hash,
        &sha256_hex(embedded.as_bytes()),
    )?;
    drop(captions_tsv);

    let (descriptions_file, descriptions_hash): (ModelFile<DescriptionsComponent<Scalar>>, _) =
        read_json(dir, MODEL_DESCRIPTIONS_FILE)?;
    check_format(descriptions_file.format, MODEL_DESCRIPTIONS_FILE)?;
    verify_vocab_hash(
        VOCAB_DESCRIPTIONS_FILE,
        &descriptions_file.vocab_hash,
        &descriptions_tsv_hash,
    )?;
    let embedded = descriptions_file.model.encoder.vocab.to_tsv();
    verify_vocab_hash(
        MODEL_DESCRIPTIONS_FILE,
        &descriptions_file.vocab_hash,
        &sha256_hex(embedded.as_bytes()),
    )?;
    drop(descriptions_tsv);

    let single = if dir.join(MODEL_SINGLE_FILE).exists() {
        let (file, _): (ModelFile<SingleClassifier<Scalar>>, _) =
            read_json(dir, MODEL_SINGLE_FILE)?;
        check_format(file.format, MODEL_SINGLE_FILE)?;
        verify_vocab_hash(
            MODEL_SINGLE_FILE,
            &file.vocab_hash,
            &encoder_hash(&(&file.model.demographics, &file.model.captions, &file.model.descriptions))?,
        )?;
        Some(file.model)
    } else {
        None
    };

    let (mut similarity, _): (SimilarityBaseline, _) = read_json(dir, SIMILARITY_FILE)?;
    similarity.rebuild();

    let ensemble = if dir.join(ENSEMBLE_FILE).exists() {
        let (file, _): (EnsembleFile, _) = read_json(dir, ENSEMBLE_FILE)?;
        check_format(file.format, ENSEMBLE_FILE)?;
        let actual = BTreeMap::from([
            (MODEL_DEMOGRAPHICS_FILE.to_string(), demographics_hash),
            (MODEL_CAPTIONS_FILE.to_string(), captions_hash),
            (MODEL_DESCRIPTIONS_FILE.to_string(), descriptions_hash),
        ]);
        for (name, recorded) in &file.component_hashes {
            match actual.get(name) {
                Some(hash) if hash == recorded => {}
                Some(hash) => {
                    return Err(Error::VocabHashMismatch {
                        expected: recorded.clone(),
                        got: format!("{hash} ({name})"),
                    })
                }
                None => {
                    return Err(Error::Bundle(format!(
                        "ensemble references unknown component {name}"
                    )))
                }
            }
        }
        Some(file.model)
    } else {
        None
    };

    let (cv_train, _): (BTreeMap<String, CvSummary<Scalar>>, _) = read_json(dir, CV_TRAIN_FILE)?;
    let cv_test_ensemble = if dir.join(CV_ENSEMBLE_FILE).exists() {
        let (cv, _): (CvSummary<Scalar>, _) = read_json(dir, CV_ENSEMBLE_FILE)?;
        Some(cv)
    } else {
        None
    };

    Ok(TrainedBundle {
        config,
        demographics: demographics_file.model,
        captions: captions_file.model,
        descriptions: descriptions_file.model,
        similarity,
        single,
        ensemble,
        splits,
        cv_train,
        cv_test_ensemble,
    })
}
