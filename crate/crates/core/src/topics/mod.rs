//! Latent topic spaces: LDA fitted by collapsed Gibbs sampling and NMF
//! fitted by multiplicative updates.

mod lda;
mod nmf;

pub use lda::{fit_lda, infer_theta, perplexity, DocTopicMatrix, LdaConfig, LdaModel, SampleAveraging};
pub use nmf::{fit_nmf, NmfConfig, NmfModel};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopicError {
    #[error("topic count must be at least 1")]
    InvalidTopicCount,
    #[error("Dirichlet priors must be positive and finite (alpha {alpha}, beta {beta})")]
    InvalidPrior { alpha: f64, beta: f64 },
    #[error("averaging thin interval must be at least 1")]
    InvalidAveraging,
    #[error("the count matrix holds no tokens")]
    NoTokens,
    #[error("vocabulary size {vocab_size} is invalid")]
    EmptyVocabulary { vocab_size: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("document {doc} assigns zero probability to term {term}")]
    ZeroProbability { doc: usize, term: usize },
    #[error("input matrix has a negative entry at ({row}, {col})")]
    NegativeInput { row: usize, col: usize },
    #[error("invalid model: {0}")]
    InvalidModel(alloc::string::String),
}
