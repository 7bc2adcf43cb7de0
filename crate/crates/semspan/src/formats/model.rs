//! LDA model files.
//!
//! JSON with `format`, `version`, the fit parameters, the hash of the
//! vocabulary the model was fitted on, and `phi` as `k` rows of
//! `vocab_size` probabilities.

use std::path::Path;

use serde::{Deserialize, Serialize};

use semspan_core::topics::LdaModel;
use semspan_core::DenseMatrix;

use super::to_json_string;
use crate::error::{Error, Result};

const FORMAT: &str = "semspan-lda";
const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    k: usize,
    vocab_size: usize,
    alpha: f64,
    beta: f64,
    iterations: usize,
    seed: u64,
    vocabulary_hash: String,
    phi: Vec<Vec<f64>>,
}

pub fn model_json(model: &LdaModel, vocabulary_hash: &str) -> String {
    let file = ModelFile {
        format: FORMAT.into(),
        version: VERSION,
        k: model.k,
        vocab_size: model.vocab_size,
        alpha: model.alpha,
        beta: model.beta,
        iterations: model.iterations,
        seed: model.seed,
        vocabulary_hash: vocabulary_hash.into(),
        phi: model.phi.iter_rows().map(<[f64]>::to_vec).collect(),
    };
    to_json_string(&file)
}

pub fn write_model(model: &LdaModel, vocabulary_hash: &str, path: &Path) -> Result<()> {
    crate::write_string(path, &model_json(model, vocabulary_hash))
}

/// Loads a model, refusing one fitted on a different vocabulary.
pub fn read_model(path: &Path, vocabulary_hash: &str) -> Result<LdaModel> {
    let file: ModelFile = serde_json::from_str(&crate::read_string(path)?).map_err(|e| Error::format(path, e.to_string()))?;
    if file.format != FORMAT || file.version != VERSION {
        return Err(Error::format(path, format!("unsupported model format {} v{}", file.format, file.version)));
    }
    if file.vocabulary_hash != vocabulary_hash {
        return Err(Error::VocabularyMismatch {
            expected: vocabulary_hash.into(),
            found: file.vocabulary_hash,
        });
    }
    let phi = DenseMatrix::from_rows(file.vocab_size, &file.phi).ok_or_else(|| Error::format(path, "phi rows have the wrong length"))?;
    let model = LdaModel {
        k: file.k,
        vocab_size: file.vocab_size,
        phi,
        alpha: file.alpha,
        beta: file.beta,
        iterations: file.iterations,
        seed: file.seed,
    };
    model.validate().map_err(|e| Error::format(path, e.to_string()))?;
    Ok(model)
}
