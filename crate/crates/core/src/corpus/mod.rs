//! Community-partitioned corpora of forum submissions.

mod synthetic;

pub use synthetic::{generate_synthetic, CommunityPlan, DocumentTruth, GroundTruth, QualityCount, QualitySpec, SyntheticSpec};

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::{tokenize, TokenizerConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorpusError {
    #[error("submission {id:?} has an empty body")]
    EmptyBody { id: String },
    #[error("submission {id:?} appears more than once")]
    DuplicateId { id: String },
    #[error("submission {id:?}: year {year} disagrees with created_utc {created_utc} (year {derived})")]
    YearConflict {
        id: String,
        year: i32,
        created_utc: i64,
        derived: i32,
    },
    #[error("corpus is empty")]
    Empty,
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
}

/// One forum post.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Submission {
    pub id: String,
    pub title: String,
    pub body: String,
    pub score: i64,
    pub num_comments: u64,
    pub created_utc: Option<i64>,
    pub community: String,
    pub year: Option<i32>,
    pub url: Option<String>,
}

impl Submission {
    /// Title and body joined by a newline; the text every analysis sees.
    pub fn text(&self) -> String {
        if self.title.is_empty() {
            self.body.clone()
        } else {
            alloc::format!("{}\n{}", self.title, self.body)
        }
    }

    /// The explicit year if present, otherwise the UTC year of `created_utc`.
    pub fn effective_year(&self) -> Option<i32> {
        self.year.or_else(|| self.created_utc.map(year_from_unix))
    }

    /// Checks that an explicit year agrees with `created_utc`.
    pub fn check_year(&self) -> Result<(), CorpusError> {
        match (self.year, self.created_utc) {
            (Some(year), Some(ts)) if year_from_unix(ts) != year => Err(CorpusError::YearConflict {
                id: self.id.clone(),
                year,
                created_utc: ts,
                derived: year_from_unix(ts),
            }),
            _ => Ok(()),
        }
    }
}

/// UTC calendar year of a unix timestamp (seconds).
pub fn year_from_unix(secs: i64) -> i32 {
    let days = secs.div_euclid(86_400);
    // Days-to-civil conversion on the proleptic Gregorian calendar.
    let z = days + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z - era * 146_097;
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let month = if mp < 10 { mp + 3 } else { mp - 9 };
    let year = yoe + era * 400 + i64::from(month <= 2);
    year as i32
}

/// Unix timestamp of January 1st, 00:00 UTC, of `year`.
pub fn unix_from_year(year: i32) -> i64 {
    let y = i64::from(year) - 1;
    let era = y.div_euclid(400);
    let yoe = y - era * 400;
    // March 1st based day count, then step back to January 1st of `year`.
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + 306;
    let days = era * 146_097 + doe - 719_468;
    days * 86_400
}

/// An immutable, insertion-ordered collection of submissions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    submissions: Vec<Submission>,
    communities: Vec<String>,
    community_index: BTreeMap<String, usize>,
}

impl Corpus {
    /// Validates and collects submissions.
    ///
    /// Rejects empty bodies and repeated ids. Year consistency is left to the
    /// caller (see [`Submission::check_year`]).
    pub fn from_submissions<I: IntoIterator<Item = Submission>>(submissions: I) -> Result<Self, CorpusError> {
        let mut builder = CorpusBuilder::default();
        for s in submissions {
            builder.push(s)?;
        }
        Ok(builder.finish())
    }

    pub fn submissions(&self) -> &[Submission] {
        &self.submissions
    }

    pub fn len(&self) -> usize {
        self.submissions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.submissions.is_empty()
    }

    /// Community labels in order of first appearance.
    pub fn communities(&self) -> &[String] {
        &self.communities
    }

    pub fn community_index(&self, label: &str) -> Option<usize> {
        self.community_index.get(label).copied()
    }

    /// Positions of the submissions of one community.
    pub fn documents_of<'a>(&'a self, label: &'a str) -> impl Iterator<Item = usize> + 'a {
        self.submissions
            .iter()
            .enumerate()
            .filter(move |(_, s)| s.community == label)
            .map(|(i, _)| i)
    }
}

/// Incremental [`Corpus`] construction.
#[derive(Debug, Default)]
pub struct CorpusBuilder {
    corpus: Corpus,
    ids: BTreeMap<String, usize>,
}

impl CorpusBuilder {
    pub fn push(&mut self, submission: Submission) -> Result<(), CorpusError> {
        if submission.body.trim().is_empty() {
            return Err(CorpusError::EmptyBody { id: submission.id });
        }
        if self.ids.contains_key(&submission.id) {
            return Err(CorpusError::DuplicateId { id: submission.id });
        }
        self.ids.insert(submission.id.clone(), self.corpus.submissions.len());
        if !self.corpus.community_index.contains_key(&submission.community) {
            let next = self.corpus.communities.len();
            self.corpus.community_index.insert(submission.community.clone(), next);
            self.corpus.communities.push(submission.community.clone());
        }
        self.corpus.submissions.push(submission);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.corpus.submissions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corpus.submissions.is_empty()
    }

    pub fn finish(self) -> Corpus {
        self.corpus
    }
}

/// Per-community activity and size statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunitySummary {
    pub community: String,
    pub posts_per_year_mean: f64,
    pub posts_per_year_std: f64,
    pub total_posts: usize,
    pub tokens_per_post_mean: f64,
    pub tokens_per_post_std: f64,
    pub total_tokens: usize,
}

/// Mean and sample standard deviation (n - 1 denominator, 0 for n < 2).
pub(crate) fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    (mean, libm::sqrt(ss / (n - 1) as f64))
}

/// One row per community, largest community first.
///
/// Yearly counts cover the years in which the community has at least one
/// dated post. Ties in size are ordered by label so the result does not
/// depend on submission order.
pub fn summarize(corpus: &Corpus, tokenizer: &TokenizerConfig) -> Result<Vec<CommunitySummary>, CorpusError> {
    if corpus.is_empty() {
        return Err(CorpusError::Empty);
    }
    struct Acc {
        per_year: BTreeMap<i32, usize>,
        tokens: Vec<usize>,
    }
    let mut acc: BTreeMap<&str, Acc> = BTreeMap::new();
    for s in corpus.submissions() {
        let a = acc.entry(s.community.as_str()).or_insert_with(|| Acc {
            per_year: BTreeMap::new(),
            tokens: Vec::new(),
        });
        if let Some(y) = s.effective_year() {
            *a.per_year.entry(y).or_default() += 1;
        }
        let n = tokenize(&s.text(), tokenizer).len();
        a.tokens.push(n);
    }
    let mut rows: Vec<CommunitySummary> = acc
        .into_iter()
        .map(|(label, mut a)| {
            // Sorted so floating-point sums do not depend on submission order.
            a.tokens.sort_unstable();
            let (py_mean, py_std) = mean_std(a.per_year.values().map(|&c| c as f64));
            let (tk_mean, tk_std) = mean_std(a.tokens.iter().map(|&c| c as f64));
            CommunitySummary {
                community: label.into(),
                posts_per_year_mean: py_mean,
                posts_per_year_std: py_std,
                total_posts: a.tokens.len(),
                tokens_per_post_mean: tk_mean,
                tokens_per_post_std: tk_std,
                total_tokens: a.tokens.iter().sum(),
            }
        })
        .collect();
    rows.sort_by(|a, b| b.total_posts.cmp(&a.total_posts).then_with(|| a.community.cmp(&b.community)));
    Ok(rows)
}
