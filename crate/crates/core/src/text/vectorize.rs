use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{DocumentTokens, TextError, Vocabulary};
use crate::matrix::CsrMatrix;

/// Identity of one matrix row.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RowLabel {
    pub id: String,
    pub community: String,
}

/// Bag-of-words counts, one row per document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocTermMatrix {
    pub counts: CsrMatrix<u32>,
    pub rows: Vec<RowLabel>,
}

impl DocTermMatrix {
    /// Pairs a count matrix with its row labels; ids must be unique.
    pub fn new(counts: CsrMatrix<u32>, rows: Vec<RowLabel>) -> Result<Self, TextError> {
        assert_eq!(counts.n_rows(), rows.len(), "row labels do not match matrix rows");
        let mut seen = BTreeSet::new();
        for r in &rows {
            if !seen.insert(r.id.as_str()) {
                return Err(TextError::DuplicateRowId(r.id.clone()));
            }
        }
        Ok(Self { counts, rows })
    }

    pub fn n_docs(&self) -> usize {
        self.counts.n_rows()
    }

    pub fn n_terms(&self) -> usize {
        self.counts.n_cols()
    }

    /// Token count of row `d`.
    pub fn row_total(&self, d: usize) -> u64 {
        self.counts.row(d).1.iter().map(|&c| u64::from(c)).sum()
    }

    pub fn total_tokens(&self) -> u64 {
        (0..self.n_docs()).map(|d| self.row_total(d)).sum()
    }

    /// Number of rows in which each column is nonzero.
    pub fn document_frequencies(&self) -> Vec<usize> {
        let mut df = vec![0; self.n_terms()];
        for (_, j, _) in self.counts.triplets() {
            df[j] += 1;
        }
        df
    }
}

/// TFIDF weights with every nonzero row scaled to unit L2 norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfMatrix {
    pub weights: CsrMatrix<f64>,
    pub rows: Vec<RowLabel>,
    pub idf: Vec<f64>,
}

impl TfidfMatrix {
    pub fn n_docs(&self) -> usize {
        self.weights.n_rows()
    }
}

/// Counts in-vocabulary tokens per document. Out-of-vocabulary tokens are
/// dropped; a document left with nothing keeps an all-zero row.
pub fn vectorize_counts(docs: &[DocumentTokens], vocab: &Vocabulary) -> Result<DocTermMatrix, TextError> {
    let mut counts = CsrMatrix::new(vocab.len());
    let mut rows = Vec::with_capacity(docs.len());
    for doc in docs {
        let mut row: BTreeMap<usize, u32> = BTreeMap::new();
        for t in &doc.tokens {
            if let Some(j) = vocab.index_of(t) {
                *row.entry(j).or_default() += 1;
            }
        }
        if row.is_empty() {
            log::warn!("document {:?} has no in-vocabulary tokens", doc.id);
        }
        counts.push_row(row.into_iter().collect());
        rows.push(RowLabel {
            id: doc.id.clone(),
            community: doc.community.clone(),
        });
    }
    DocTermMatrix::new(counts, rows)
}

/// Smoothed inverse document frequency: `ln((1 + N) / (1 + df)) + 1`.
pub(crate) fn smoothed_idf(n_docs: usize, df: usize) -> f64 {
    libm::log((1.0 + n_docs as f64) / (1.0 + df as f64)) + 1.0
}

/// `count * idf` per entry, then each nonzero row divided by its L2 norm.
/// Document frequencies are taken from the count matrix itself.
pub fn tfidf(counts: &DocTermMatrix) -> Result<TfidfMatrix, TextError> {
    let n = counts.n_docs();
    if n == 0 {
        return Err(TextError::EmptyMatrix);
    }
    let idf: Vec<f64> = counts.document_frequencies().into_iter().map(|df| smoothed_idf(n, df)).collect();
    let mut weights = CsrMatrix::new(counts.n_terms());
    for d in 0..n {
        let mut row: Vec<(usize, f64)> = counts.counts.row_iter(d).map(|(j, c)| (j, f64::from(c) * idf[j])).collect();
        let norm = libm::sqrt(row.iter().map(|(_, w)| w * w).sum::<f64>());
        if norm > 0.0 {
            for (_, w) in &mut row {
                *w /= norm;
            }
        }
        weights.push_row(row);
    }
    Ok(TfidfMatrix {
        weights,
        rows: counts.rows.clone(),
        idf,
    })
}

/// Ranks terms by their summed weight over a subset of rows.
///
/// A row listed twice counts twice. Ties go to the lexicographically smaller
/// term; zero-score terms are never returned.
pub fn top_terms(subset: &[usize], tfidf: &TfidfMatrix, vocab: &Vocabulary, n: usize) -> Result<Vec<(String, f64)>, TextError> {
    if subset.is_empty() {
        return Err(TextError::EmptySubset);
    }
    if vocab.len() != tfidf.weights.n_cols() {
        return Err(TextError::DimensionMismatch {
            vocab: vocab.len(),
            cols: tfidf.weights.n_cols(),
        });
    }
    let mut multiplicity: BTreeMap<usize, f64> = BTreeMap::new();
    for &r in subset {
        if r >= tfidf.n_docs() {
            return Err(TextError::RowOutOfRange {
                row: r,
                rows: tfidf.n_docs(),
            });
        }
        *multiplicity.entry(r).or_default() += 1.0;
    }
    // Summing multiplicity-weighted rows in row order keeps scores exactly
    // proportional when the whole subset is repeated.
    let mut scores = vec![0.0; vocab.len()];
    for (&r, &m) in &multiplicity {
        for (j, w) in tfidf.weights.row_iter(r) {
            scores[j] += m * w;
        }
    }
    let mut ranked: Vec<(usize, f64)> = scores.into_iter().enumerate().filter(|&(_, s)| s > 0.0).collect();
    ranked.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(Ordering::Equal)
            .then_with(|| vocab.term(a.0).cmp(vocab.term(b.0)))
    });
    ranked.truncate(n);
    Ok(ranked.into_iter().map(|(j, s)| (String::from(vocab.term(j)), s)).collect())
}
