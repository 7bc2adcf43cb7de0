use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{DocumentTokens, TextError};

/// Document-frequency filters applied when building a vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VocabParams {
    pub min_df: usize,
    /// Terms in more than `max_df_ratio * N` documents are dropped.
    pub max_df_ratio: f64,
}

impl Default for VocabParams {
    fn default() -> Self {
        Self {
            min_df: 2,
            max_df_ratio: 1.0,
        }
    }
}

/// Dense bijection between terms and column indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: BTreeMap<String, usize>,
    document_frequency: Vec<usize>,
    n_documents: usize,
}

impl Vocabulary {
    /// Rebuilds a vocabulary from its exported parts.
    pub fn from_parts(terms: Vec<String>, document_frequency: Vec<usize>, n_documents: usize) -> Result<Self, TextError> {
        if terms.len() != document_frequency.len() {
            return Err(TextError::InconsistentVocabulary(format!(
                "{} terms but {} document frequencies",
                terms.len(),
                document_frequency.len()
            )));
        }
        if let Some(df) = document_frequency.iter().find(|&&df| df > n_documents) {
            return Err(TextError::InconsistentVocabulary(format!(
                "document frequency {df} exceeds {n_documents} documents"
            )));
        }
        let mut index = BTreeMap::new();
        for (i, t) in terms.iter().enumerate() {
            if index.insert(t.clone(), i).is_some() {
                return Err(TextError::InconsistentVocabulary(format!("term {t:?} listed twice")));
            }
        }
        Ok(Self {
            terms,
            index,
            document_frequency,
            n_documents,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, index: usize) -> &str {
        &self.terms[index]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn document_frequency(&self, index: usize) -> usize {
        self.document_frequency[index]
    }

    pub fn document_frequencies(&self) -> &[usize] {
        &self.document_frequency
    }

    /// Number of documents the frequencies were counted over.
    pub fn n_documents(&self) -> usize {
        self.n_documents
    }
}

/// Keeps the terms with `min_df <= df <= max_df_ratio * N`, indexed in order
/// of first occurrence.
pub fn build_vocabulary(docs: &[DocumentTokens], params: VocabParams) -> Result<Vocabulary, TextError> {
    if params.min_df < 1 {
        return Err(TextError::InvalidParams("min_df must be at least 1".into()));
    }
    if !(params.max_df_ratio > 0.0 && params.max_df_ratio <= 1.0) {
        return Err(TextError::InvalidParams(format!(
            "max_df_ratio must lie in (0, 1], got {}",
            params.max_df_ratio
        )));
    }
    let mut order: Vec<&str> = Vec::new();
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in docs {
        let distinct: BTreeSet<&str> = doc.tokens.iter().map(String::as_str).collect();
        for t in &doc.tokens {
            if !df.contains_key(t.as_str()) {
                order.push(t);
                df.insert(t, 0);
            }
        }
        for t in distinct {
            *df.get_mut(t).expect("seen above") += 1;
        }
    }
    let max_df = params.max_df_ratio * docs.len() as f64;
    let (terms, freqs): (Vec<String>, Vec<usize>) = order
        .into_iter()
        .map(|t| (t, df[t]))
        .filter(|&(_, d)| d >= params.min_df && d as f64 <= max_df)
        .map(|(t, d)| (String::from(t), d))
        .unzip();
    if terms.is_empty() {
        return Err(TextError::EmptyVocabulary);
    }
    Vocabulary::from_parts(terms, freqs, docs.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn docs(texts: &[&str]) -> Vec<DocumentTokens> {
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| DocumentTokens::new(format!("d{i}"), "c", t.split_whitespace().map(String::from).collect()))
            .collect()
    }

    fn p(min_df: usize, max_df_ratio: f64) -> VocabParams {
        VocabParams { min_df, max_df_ratio }
    }

    #[test]
    fn counts_document_frequency() {
        let v = build_vocabulary(&docs(&["a b", "b c"]), p(1, 1.0)).unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(v.terms(), &["a", "b", "c"]);
        assert_eq!(v.document_frequency(v.index_of("b").unwrap()), 2);
    }

    #[test]
    fn min_df_filters() {
        let v = build_vocabulary(&docs(&["a b", "b c"]), p(2, 1.0)).unwrap();
        assert_eq!(v.terms(), &["b"]);
        assert_eq!(v.index_of("b"), Some(0));
    }

    #[test]
    fn max_df_filters() {
        let v = build_vocabulary(&docs(&["a b", "b c", "b a"]), p(1, 0.7)).unwrap();
        assert_eq!(v.terms(), &["a", "c"]);
    }

    #[test]
    fn first_occurrence_order_with_repeats() {
        let v = build_vocabulary(&docs(&["z z y", "x z"]), p(1, 1.0)).unwrap();
        assert_eq!(v.terms(), &["z", "y", "x"]);
        assert_eq!(v.document_frequencies(), &[2, 1, 1]);
    }

    #[test]
    fn empty_vocabulary_is_error() {
        assert_eq!(build_vocabulary(&docs(&[""]), p(1, 1.0)), Err(TextError::EmptyVocabulary));
        assert_eq!(build_vocabulary(&docs(&["a", "b"]), p(2, 1.0)), Err(TextError::EmptyVocabulary));
    }

    #[test]
    fn bad_params() {
        assert!(matches!(build_vocabulary(&docs(&["a"]), p(0, 1.0)), Err(TextError::InvalidParams(_))));
        assert!(matches!(build_vocabulary(&docs(&["a"]), p(1, 0.0)), Err(TextError::InvalidParams(_))));
        assert!(matches!(build_vocabulary(&docs(&["a"]), p(1, 1.5)), Err(TextError::InvalidParams(_))));
    }

    #[test]
    fn from_parts_validates() {
        assert!(Vocabulary::from_parts(vec!["a".into(), "a".into()], vec![1, 1], 2).is_err());
        assert!(Vocabulary::from_parts(vec!["a".into()], vec![3], 2).is_err());
        assert!(Vocabulary::from_parts(vec!["a".into()], vec![], 2).is_err());
        assert!(Vocabulary::from_parts(vec!["a".into()], vec![2], 2).is_ok());
    }
}
