//! Tokenization, vocabulary, count vectors, TFIDF weighting and term ranking.

mod tokenize;
mod vectorize;
mod vocab;

pub use tokenize::{parse_stopwords, tokenize, tokenize_corpus, DocumentTokens, TokenizerConfig, ENGLISH_STOPWORDS};
pub use vectorize::{tfidf, top_terms, vectorize_counts, DocTermMatrix, RowLabel, TfidfMatrix};
pub use vocab::{build_vocabulary, VocabParams, Vocabulary};

use alloc::string::String;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TextError {
    #[error("no term survives the document-frequency filters")]
    EmptyVocabulary,
    #[error("invalid vocabulary parameters: {0}")]
    InvalidParams(String),
    #[error("inconsistent vocabulary: {0}")]
    InconsistentVocabulary(String),
    #[error("row id {0:?} appears more than once")]
    DuplicateRowId(String),
    #[error("matrix has no rows")]
    EmptyMatrix,
    #[error("document subset is empty")]
    EmptySubset,
    #[error("row {row} is out of range for a matrix of {rows} rows")]
    RowOutOfRange { row: usize, rows: usize },
    #[error("vocabulary has {vocab} terms but the matrix has {cols} columns")]
    DimensionMismatch { vocab: usize, cols: usize },
}
