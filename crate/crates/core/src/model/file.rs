//! Versioned JSON model file with a SHA-256 checksum over the body.
//!
//! The checksum covers the compact serialization of every field except
//! `checksum` itself; floats are written in shortest round-trip form, so
//! re-serializing a loaded body reproduces the hashed bytes exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{ClassWeights, ModelKind, NbsvmModel, TrainConfig};
use crate::corpus::Sentiment;
use crate::error::{Error, Result};
use crate::features::{NgramRange, Vocabulary};
use crate::preprocess::{PreprocessConfig, SegmentDictionary};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
struct VocabularySection {
    ngrams: Vec<String>,
    df: Vec<u32>,
    n_docs: usize,
    ngram_range: NgramRange,
    min_df: usize,
}

#[derive(Serialize, Deserialize)]
struct ClassSection {
    label: Sentiment,
    r: Vec<f64>,
    w: Vec<f64>,
    b: f64,
}

#[derive(Serialize, Deserialize)]
struct Body {
    format_version: u64,
    model_kind: ModelKind,
    preprocess_config: PreprocessConfig,
    dictionary: Vec<(String, u64)>,
    vocabulary: VocabularySection,
    classes: Vec<ClassSection>,
    train_config: TrainConfig,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    #[serde(flatten)]
    body: Body,
    checksum: String,
}

fn checksum(body: &Body) -> Result<String> {
    let bytes = serde_json::to_vec(body).map_err(|e| Error::ModelFormat(e.to_string()))?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

fn body_of(model: &NbsvmModel) -> Body {
    let v = &model.vocabulary;
    Body {
        format_version: FORMAT_VERSION,
        model_kind: model.kind,
        preprocess_config: model.preprocess_config.clone(),
        dictionary: model.dictionary.sorted_entries(),
        vocabulary: VocabularySection {
            ngrams: v.terms().to_vec(),
            df: v.df().to_vec(),
            n_docs: v.n_docs(),
            ngram_range: v.range(),
            min_df: v.min_df(),
        },
        classes: model
            .classes
            .iter()
            .map(|c| ClassSection { label: c.label, r: c.r.clone(), w: c.w.clone(), b: c.b })
            .collect(),
        train_config: model.train_config.clone(),
    }
}

pub fn model_to_json(model: &NbsvmModel) -> Result<String> {
    model.validate()?;
    let body = body_of(model);
    let checksum = checksum(&body)?;
    serde_json::to_string(&ModelFile { body, checksum }).map_err(|e| Error::ModelFormat(e.to_string()))
}

pub fn model_from_json(text: &str) -> Result<NbsvmModel> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::ModelFormat(format!("not a complete JSON document: {e}")))?;
    let version = value
        .get("format_version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::ModelFormat("missing format_version".into()))?;
    if version != FORMAT_VERSION {
        return Err(Error::Version { found: version, supported: FORMAT_VERSION });
    }
    let file: ModelFile = serde_json::from_value(value).map_err(|e| Error::ModelFormat(e.to_string()))?;
    if checksum(&file.body)? != file.checksum {
        return Err(Error::Checksum);
    }

    let body = file.body;
    let range = NgramRange::new(body.vocabulary.ngram_range.min_n(), body.vocabulary.ngram_range.max_n())?;
    let vocabulary = Vocabulary::from_parts(
        body.vocabulary.ngrams,
        body.vocabulary.df,
        body.vocabulary.n_docs,
        range,
        body.vocabulary.min_df,
    )?;
    let model = NbsvmModel {
        kind: body.model_kind,
        vocabulary,
        classes: body.classes.into_iter().map(|c| ClassWeights { label: c.label, r: c.r, w: c.w, b: c.b }).collect(),
        train_config: body.train_config,
        preprocess_config: body.preprocess_config,
        dictionary: SegmentDictionary::from_pairs(body.dictionary),
    };
    model.validate()?;
    Ok(model)
}

/// Writes to a sibling temporary file and renames it into place, so a
/// failed write never leaves a partial model at `path`.
pub fn save_model(model: &NbsvmModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let json = model_to_json(model)?;
    let file_name =
        path.file_name().ok_or_else(|| Error::Config(format!("model path {} has no file name", path.display())))?;
    let mut tmp_name = file_name.to_os_string();
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(json.as_bytes())?;
        f.write_all(b"\n")?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    if let Err(e) = write() {
        let _ = fs::remove_file(&tmp);
        return Err(e.into());
    }
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<NbsvmModel> {
    let text = fs::read_to_string(path)?;
    model_from_json(&text)
}
