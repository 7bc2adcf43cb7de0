//! Vocabulary export: `{"n_documents": N, "terms": [{"term", "index", "df"}]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use semspan_core::text::Vocabulary;

use super::to_json_string;
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct Entry {
    term: String,
    index: usize,
    df: usize,
}

#[derive(Serialize, Deserialize)]
struct VocabFile {
    n_documents: usize,
    terms: Vec<Entry>,
}

pub fn vocabulary_json(vocab: &Vocabulary) -> String {
    let file = VocabFile {
        n_documents: vocab.n_documents(),
        terms: vocab
            .terms()
            .iter()
            .enumerate()
            .map(|(index, term)| Entry {
                term: term.clone(),
                index,
                df: vocab.document_frequency(index),
            })
            .collect(),
    };
    to_json_string(&file)
}

pub fn write_vocabulary(vocab: &Vocabulary, path: &Path) -> Result<()> {
    crate::write_string(path, &vocabulary_json(vocab))
}

pub fn read_vocabulary(path: &Path) -> Result<Vocabulary> {
    let file: VocabFile = serde_json::from_str(&crate::read_string(path)?).map_err(|e| Error::format(path, e.to_string()))?;
    let mut terms = Vec::with_capacity(file.terms.len());
    let mut df = Vec::with_capacity(file.terms.len());
    for (i, e) in file.terms.into_iter().enumerate() {
        if e.index != i {
            return Err(Error::format(path, format!("term {:?} has index {}, expected {i}", e.term, e.index)));
        }
        terms.push(e.term);
        df.push(e.df);
    }
    Ok(Vocabulary::from_parts(terms, df, file.n_documents)?)
}
