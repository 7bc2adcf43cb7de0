//! Planted-topic corpus generator.
//!
//! Every topic owns a contiguous, disjoint block of the vocabulary. A quality
//! is a fixed mixture over topics, and each token of a document is drawn by
//! picking a topic from its quality's mixture and then a term from that
//! topic. The generator records which quality produced each document, so the
//! whole pipeline can be scored against known structure.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{unix_from_year, Corpus, CorpusBuilder, CorpusError, Submission};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualitySpec {
    pub label: String,
    /// Probability of each planted topic; length `k_true`.
    pub mixture: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QualityCount {
    pub quality: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommunityPlan {
    pub label: String,
    pub documents: Vec<QualityCount>,
}

fn default_start_year() -> i32 {
    2013
}

fn default_end_year() -> i32 {
    2020
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub k_true: usize,
    pub vocabulary_size: usize,
    /// Zipf exponent of term weights inside a topic's block; 0 is uniform.
    #[serde(default)]
    pub term_skew: f64,
    pub qualities: Vec<QualitySpec>,
    pub communities: Vec<CommunityPlan>,
    /// Document lengths are uniform on `[0.75 m, 1.25 m]` (rounded inward).
    pub doc_length_mean: usize,
    pub seed: u64,
    #[serde(default = "default_start_year")]
    pub start_year: i32,
    #[serde(default = "default_end_year")]
    pub end_year: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentTruth {
    pub id: String,
    pub community: String,
    pub quality: String,
}

/// What the generator planted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub vocabulary: Vec<String>,
    /// `k_true` rows, each a distribution over `vocabulary`.
    pub topic_terms: Vec<Vec<f64>>,
    pub qualities: Vec<QualitySpec>,
    pub documents: Vec<DocumentTruth>,
}

impl GroundTruth {
    /// Term distribution of a quality: its mixture applied to the topics.
    pub fn quality_terms(&self, label: &str) -> Option<Vec<f64>> {
        let q = self.qualities.iter().find(|q| q.label == label)?;
        let mut out = vec![0.0; self.vocabulary.len()];
        for (w, row) in q.mixture.iter().zip(&self.topic_terms) {
            for (o, p) in out.iter_mut().zip(row) {
                *o += w * p;
            }
        }
        Some(out)
    }

    /// Terms that only the given quality can emit.
    pub fn exclusive_terms(&self, label: &str) -> BTreeSet<String> {
        let Some(own) = self.quality_terms(label) else {
            return BTreeSet::new();
        };
        let others: Vec<Vec<f64>> = self
            .qualities
            .iter()
            .filter(|q| q.label != label)
            .filter_map(|q| self.quality_terms(&q.label))
            .collect();
        own.iter()
            .enumerate()
            .filter(|&(t, &p)| p > 0.0 && others.iter().all(|o| o[t] == 0.0))
            .map(|(t, _)| self.vocabulary[t].clone())
            .collect()
    }

    /// Ids of the documents generated from a quality, in corpus order.
    pub fn documents_of_quality<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.documents.iter().filter(move |d| d.quality == label).map(|d| d.id.as_str())
    }
}

/// Vocabulary block owned by planted topic `topic`.
pub fn topic_block(vocabulary_size: usize, k_true: usize, topic: usize) -> Range<usize> {
    let base = vocabulary_size / k_true;
    let extra = vocabulary_size % k_true;
    let start = topic * base + topic.min(extra);
    let len = base + usize::from(topic < extra);
    start..start + len
}

/// Synthetic term name: a fixed-width base-26 code behind a `zq` prefix, so
/// every term is alphabetic, at least four characters, and no English word.
pub fn term_name(index: usize, vocabulary_size: usize) -> String {
    let mut width = 1;
    let mut cap = 26usize;
    while cap < vocabulary_size {
        width += 1;
        cap = cap.saturating_mul(26);
    }
    let width = width.max(2);
    let mut code = vec![b'a'; width];
    let mut n = index;
    for slot in code.iter_mut().rev() {
        *slot = b'a' + (n % 26) as u8;
        n /= 26;
    }
    let mut s = String::from("zq");
    s.extend(code.iter().map(|&b| b as char));
    s
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<(), CorpusError> {
        let bad = |msg: String| Err(CorpusError::InvalidSpec(msg));
        if self.k_true == 0 {
            return bad("k_true must be at least 1".into());
        }
        if self.vocabulary_size < self.k_true {
            return bad(format!(
                "vocabulary_size {} is smaller than k_true {}",
                self.vocabulary_size, self.k_true
            ));
        }
        if self.doc_length_mean == 0 {
            return bad("doc_length_mean must be at least 1".into());
        }
        if !(self.term_skew.is_finite() && self.term_skew >= 0.0) {
            return bad("term_skew must be a finite non-negative number".into());
        }
        if self.start_year > self.end_year {
            return bad("start_year is after end_year".into());
        }
        let mut labels = BTreeSet::new();
        for q in &self.qualities {
            if !labels.insert(q.label.as_str()) {
                return bad(format!("quality {:?} declared twice", q.label));
            }
            if q.mixture.len() != self.k_true {
                return bad(format!(
                    "quality {:?} mixture has {} entries, expected {}",
                    q.label,
                    q.mixture.len(),
                    self.k_true
                ));
            }
            let sum: f64 = q.mixture.iter().sum();
            if q.mixture.iter().any(|&p| !(p >= 0.0 && p.is_finite())) || (sum - 1.0).abs() > 1e-9 {
                return bad(format!("quality {:?} mixture is not a probability vector", q.label));
            }
        }
        let mut communities = BTreeSet::new();
        for c in &self.communities {
            if c.label.is_empty() {
                return bad("community label is empty".into());
            }
            if !communities.insert(c.label.as_str()) {
                return bad(format!("community {:?} declared twice", c.label));
            }
            for d in &c.documents {
                if !labels.contains(d.quality.as_str()) {
                    return bad(format!("community {:?} references undeclared quality {:?}", c.label, d.quality));
                }
            }
        }
        Ok(())
    }

    pub fn total_documents(&self) -> usize {
        self.communities.iter().flat_map(|c| &c.documents).map(|d| d.count).sum()
    }

    fn planted_topics(&self) -> Vec<Vec<f64>> {
        (0..self.k_true)
            .map(|z| {
                let block = topic_block(self.vocabulary_size, self.k_true, z);
                let mut row = vec![0.0; self.vocabulary_size];
                let weights: Vec<f64> = (0..block.len())
                    .map(|r| 1.0 / libm::pow((r + 1) as f64, self.term_skew))
                    .collect();
                let total: f64 = weights.iter().sum();
                for (t, w) in block.zip(weights) {
                    row[t] = w / total;
                }
                row
            })
            .collect()
    }
}

/// Generates a corpus and its ground truth. Same spec, same output.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<(Corpus, GroundTruth), CorpusError> {
    spec.validate()?;
    let vocabulary: Vec<String> = (0..spec.vocabulary_size).map(|i| term_name(i, spec.vocabulary_size)).collect();
    let topics = spec.planted_topics();
    let topic_totals: Vec<f64> = topics.iter().map(|r| r.iter().sum()).collect();
    let qualities: BTreeMap<&str, &QualitySpec> = spec.qualities.iter().map(|q| (q.label.as_str(), q)).collect();

    let lo = (spec.doc_length_mean * 3).div_ceil(4).max(1);
    let hi = (spec.doc_length_mean * 5 / 4).max(lo);
    let t0 = unix_from_year(spec.start_year);
    let t1 = unix_from_year(spec.end_year + 1) - 1;

    let mut rng = rng::stream(spec.seed, 0);
    let mut builder = CorpusBuilder::default();
    let mut documents = Vec::with_capacity(spec.total_documents());
    for community in &spec.communities {
        let n_docs: usize = community.documents.iter().map(|d| d.count).sum();
        if n_docs == 0 {
            log::warn!("community {:?} has no documents and will not appear in the corpus", community.label);
        }
        let mut ordinal = 0usize;
        for plan in &community.documents {
            let quality = qualities[plan.quality.as_str()];
            let mix_total: f64 = quality.mixture.iter().sum();
            for _ in 0..plan.count {
                let len = rng.random_range(lo..=hi);
                let mut body = String::with_capacity(len * 8);
                for i in 0..len {
                    let z = rng::sample_weighted(&mut rng, &quality.mixture, mix_total);
                    let t = rng::sample_weighted(&mut rng, &topics[z], topic_totals[z]);
                    if i > 0 {
                        body.push(' ');
                    }
                    body.push_str(&vocabulary[t]);
                }
                let id = format!("{}-{:06}", community.label, ordinal);
                ordinal += 1;
                let submission = Submission {
                    id: id.clone(),
                    title: String::new(),
                    body,
                    score: rng.random_range(0..50),
                    num_comments: rng.random_range(0..20),
                    created_utc: Some(rng.random_range(t0..=t1)),
                    community: community.label.clone(),
                    year: None,
                    url: None,
                };
                builder.push(submission)?;
                documents.push(DocumentTruth {
                    id,
                    community: community.label.clone(),
                    quality: quality.label.clone(),
                });
            }
        }
    }
    let truth = GroundTruth {
        vocabulary,
        topic_terms: topics,
        qualities: spec.qualities.clone(),
        documents,
    };
    Ok((builder.finish(), truth))
}
