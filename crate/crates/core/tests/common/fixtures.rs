//! Seeded inputs shared by the oracle tests.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semspan_core::corpus::{generate_synthetic, CommunityPlan, GroundTruth, QualityCount, QualitySpec, SyntheticSpec};
use semspan_core::text::{build_vocabulary, tokenize_corpus, vectorize_counts, DocTermMatrix, RowLabel, TokenizerConfig, VocabParams, Vocabulary};
use semspan_core::{CsrMatrix, DenseMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small random count matrix with roughly `fill` of the entries nonzero.
pub fn random_counts(r: &mut ChaCha8Rng, n: usize, v: usize, fill: f64) -> Vec<Vec<u32>> {
    (0..n)
        .map(|_| (0..v).map(|_| if r.random::<f64>() < fill { r.random_range(1..6) } else { 0 }).collect())
        .collect()
}

pub fn doc_term(counts: &[Vec<u32>], v: usize) -> DocTermMatrix {
    let mut m = CsrMatrix::new(v);
    let mut rows = Vec::new();
    for (d, row) in counts.iter().enumerate() {
        m.push_row(row.iter().enumerate().filter(|(_, &c)| c > 0).map(|(j, &c)| (j, c)).collect());
        rows.push(RowLabel {
            id: format!("d{d}"),
            community: format!("c{}", d % 3),
        });
    }
    DocTermMatrix::new(m, rows).unwrap()
}

pub fn terms(v: usize) -> Vec<String> {
    (0..v).map(|i| format!("t{i:02}")).collect()
}

pub fn vocabulary(counts: &[Vec<u32>], v: usize) -> Vocabulary {
    let df = (0..v).map(|t| counts.iter().filter(|r| r[t] > 0).count()).collect();
    Vocabulary::from_parts(terms(v), df, counts.len()).unwrap()
}

pub fn dense(rows: &[Vec<f64>]) -> DenseMatrix {
    DenseMatrix::from_rows(rows[0].len(), rows.iter().map(Vec::as_slice)).unwrap()
}

pub fn to_rows(m: &DenseMatrix) -> Vec<Vec<f64>> {
    m.iter_rows().map(<[f64]>::to_vec).collect()
}

/// Uniform points in the unit box.
pub fn uniform_points(r: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..dim).map(|_| r.random::<f64>()).collect()).collect()
}

/// `per` points around each center, uniform within a box of side `2 * spread`.
pub fn blobs(r: &mut ChaCha8Rng, centers: &[[f64; 2]], per: usize, spread: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for c in centers {
        for _ in 0..per {
            out.push(vec![c[0] + spread * (2.0 * r.random::<f64>() - 1.0), c[1] + spread * (2.0 * r.random::<f64>() - 1.0)]);
        }
    }
    out
}

fn quality(label: &str, mixture: Vec<f64>) -> QualitySpec {
    QualitySpec {
        label: label.into(),
        mixture,
    }
}

fn plan(label: &str, docs: &[(&str, usize)]) -> CommunityPlan {
    CommunityPlan {
        label: label.into(),
        documents: docs
            .iter()
            .map(|&(q, count)| QualityCount {
                quality: q.into(),
                count,
            })
            .collect(),
    }
}

/// Three planted topics on disjoint vocabulary blocks, 50 single-topic
/// documents each, about 140 tokens per document.
pub fn planted_topics_spec(seed: u64) -> SyntheticSpec {
    SyntheticSpec {
        k_true: 3,
        vocabulary_size: 60,
        term_skew: 1.0,
        qualities: vec![
            quality("q0", vec![1.0, 0.0, 0.0]),
            quality("q1", vec![0.0, 1.0, 0.0]),
            quality("q2", vec![0.0, 0.0, 1.0]),
        ],
        communities: vec![plan("planted", &[("q0", 50), ("q1", 50), ("q2", 50)])],
        doc_length_mean: 140,
        seed,
        start_year: 2013,
        end_year: 2020,
    }
}

/// Four communities: `shared` in all, `pair` in A and B, `solo` in C.
/// 200 documents per community, 90 to 150 tokens each.
pub fn four_community_spec(seed: u64) -> SyntheticSpec {
    SyntheticSpec {
        k_true: 3,
        vocabulary_size: 300,
        term_skew: 0.0,
        qualities: vec![
            quality("shared", vec![1.0, 0.0, 0.0]),
            quality("pair", vec![0.0, 1.0, 0.0]),
            quality("solo", vec![0.0, 0.0, 1.0]),
        ],
        communities: vec![
            plan("A", &[("shared", 100), ("pair", 100)]),
            plan("B", &[("shared", 100), ("pair", 100)]),
            plan("C", &[("shared", 100), ("solo", 100)]),
            plan("D", &[("shared", 200)]),
        ],
        doc_length_mean: 120,
        seed,
        start_year: 2013,
        end_year: 2020,
    }
}

/// Generates a spec and runs it through tokenization and counting.
pub fn counted(spec: &SyntheticSpec) -> (DocTermMatrix, Vocabulary, GroundTruth) {
    let (corpus, truth) = generate_synthetic(spec).unwrap();
    let docs = tokenize_corpus(&corpus, &TokenizerConfig::default());
    let vocab = build_vocabulary(&docs, VocabParams { min_df: 1, max_df_ratio: 1.0 }).unwrap();
    let counts = vectorize_counts(&docs, &vocab).unwrap();
    (counts, vocab, truth)
}

/// Planted topic rows re-indexed to a fitted vocabulary.
pub fn planted_on(vocab: &Vocabulary, truth: &GroundTruth) -> Vec<Vec<f64>> {
    truth
        .topic_terms
        .iter()
        .map(|row| {
            let mut out = vec![0.0; vocab.len()];
            for (t, &p) in row.iter().enumerate() {
                if let Some(j) = vocab.index_of(&truth.vocabulary[t]) {
                    out[j] = p;
                }
            }
            let s: f64 = out.iter().sum();
            out.iter().map(|p| p / s).collect()
        })
        .collect()
}
