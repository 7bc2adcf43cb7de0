//! Submission corpora stored as JSON Lines.
//!
//! Each line is one object with `id`, `body` and `subreddit` (or
//! `community`) required, and `title`, `score`, `num_comments`,
//! `created_utc`, `year` and `url` optional. Unknown keys are ignored.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use semspan_core::corpus::{Corpus, CorpusBuilder, CorpusError, Submission};

use crate::error::{Error, Result};
use crate::hash::sha256_hex;
use crate::write_atomic;

/// A line that lenient loading left out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedLine {
    /// 1-based line number.
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct LoadReport {
    pub corpus: Corpus,
    pub skipped: Vec<SkippedLine>,
    /// Lines whose `year` disagreed with `created_utc`; the explicit year was kept.
    pub year_conflicts: usize,
}

impl LoadReport {
    pub fn skip_count(&self) -> usize {
        self.skipped.len()
    }
}

fn field<'a>(obj: &'a Map<String, Value>, keys: &[&str]) -> Option<&'a Value> {
    keys.iter().find_map(|k| obj.get(*k)).filter(|v| !v.is_null())
}

fn text(obj: &Map<String, Value>, key: &str) -> Result<Option<String>, String> {
    match field(obj, &[key]) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(other) => Err(format!("field {key:?} must be a string, found {other}")),
    }
}

fn integer(obj: &Map<String, Value>, key: &str) -> Result<Option<i64>, String> {
    let bad = || format!("field {key:?} must be an integer");
    match field(obj, &[key]) {
        None => Ok(None),
        Some(Value::Number(n)) => {
            if let Some(i) = n.as_i64() {
                Ok(Some(i))
            } else {
                // Some exports write timestamps as `1402833600.0`.
                let f = n.as_f64().ok_or_else(bad)?;
                if f.fract() == 0.0 && f.abs() < 9.0e15 {
                    Ok(Some(f as i64))
                } else {
                    Err(bad())
                }
            }
        }
        Some(Value::String(s)) => s.trim().parse().map(Some).map_err(|_| bad()),
        Some(_) => Err(bad()),
    }
}

/// Parses one JSON object into a submission.
pub fn parse_submission(line: &str) -> Result<Submission, String> {
    let value: Value = serde_json::from_str(line).map_err(|e| format!("malformed JSON: {e}"))?;
    let Value::Object(obj) = value else {
        return Err("line is not a JSON object".into());
    };
    let id = match field(&obj, &["id"]) {
        Some(Value::String(s)) => s.clone(),
        Some(Value::Number(n)) => n.to_string(),
        Some(_) => return Err("field \"id\" must be a string or number".into()),
        None => return Err("missing required field \"id\"".into()),
    };
    let body = text(&obj, "body")?.ok_or("missing required field \"body\"")?;
    let community = match field(&obj, &["subreddit", "community"]) {
        Some(Value::String(s)) if !s.is_empty() => s.clone(),
        Some(_) => return Err("field \"subreddit\" must be a non-empty string".into()),
        None => return Err("missing required field \"subreddit\"".into()),
    };
    let num_comments = match integer(&obj, "num_comments")? {
        Some(n) if n < 0 => return Err("field \"num_comments\" must be non-negative".into()),
        n => n.unwrap_or(0) as u64,
    };
    let year = match integer(&obj, "year")? {
        Some(y) => Some(i32::try_from(y).map_err(|_| "field \"year\" is out of range")?),
        None => None,
    };
    Ok(Submission {
        id,
        title: text(&obj, "title")?.unwrap_or_default(),
        body,
        score: integer(&obj, "score")?.unwrap_or(0),
        num_comments,
        created_utc: integer(&obj, "created_utc")?,
        community,
        year,
        url: text(&obj, "url")?,
    })
}

/// Reads a corpus. In strict mode the first bad line is an error; otherwise
/// bad lines are counted, logged and skipped. Blank lines are ignored.
pub fn load_jsonl(path: &Path, strict: bool) -> Result<LoadReport> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut builder = CorpusBuilder::default();
    let mut skipped = Vec::new();
    let mut year_conflicts = 0;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: line_no,
            message,
        };
        let outcome = parse_submission(&line).and_then(|s| match s.check_year() {
            Err(e) if strict => Err(e.to_string()),
            Err(e) => {
                log::warn!("{}:{line_no}: {e}; keeping the explicit year", path.display());
                year_conflicts += 1;
                Ok(s)
            }
            Ok(()) => Ok(s),
        });
        let result = outcome.and_then(|s| {
            builder.push(s).map_err(|e| match e {
                CorpusError::EmptyBody { .. } => "empty body".to_string(),
                other => other.to_string(),
            })
        });
        if let Err(reason) = result {
            if strict {
                return Err(parse_err(reason));
            }
            log::warn!("{}:{line_no}: skipped: {reason}", path.display());
            skipped.push(SkippedLine { line: line_no, reason });
        }
    }
    if !skipped.is_empty() {
        log::warn!("{}: skipped {} line(s)", path.display(), skipped.len());
    }
    Ok(LoadReport {
        corpus: builder.finish(),
        skipped,
        year_conflicts,
    })
}

#[derive(Serialize)]
struct Record<'a> {
    id: &'a str,
    title: &'a str,
    body: &'a str,
    score: i64,
    num_comments: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    created_utc: Option<i64>,
    subreddit: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    year: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    url: Option<&'a str>,
}

fn record(s: &Submission) -> Record<'_> {
    Record {
        id: &s.id,
        title: &s.title,
        body: &s.body,
        score: s.score,
        num_comments: s.num_comments,
        created_utc: s.created_utc,
        subreddit: &s.community,
        year: s.year,
        url: s.url.as_deref(),
    }
}

/// The corpus in canonical JSONL form, one submission per line.
pub fn to_jsonl(corpus: &Corpus) -> String {
    let mut out = String::new();
    for s in corpus.submissions() {
        out.push_str(&serde_json::to_string(&record(s)).expect("submission serializes"));
        out.push('\n');
    }
    out
}

pub fn write_jsonl(corpus: &Corpus, path: &Path) -> Result<()> {
    write_atomic(path, |w| {
        let mut w = BufWriter::new(w);
        for s in corpus.submissions() {
            serde_json::to_writer(&mut w, &record(s)).map_err(std::io::Error::other)?;
            w.write_all(b"\n")?;
        }
        w.flush()
    })
}

/// SHA-256 of the canonical serialization; stable across load/write cycles.
pub fn corpus_fingerprint(corpus: &Corpus) -> String {
    sha256_hex(to_jsonl(corpus).as_bytes())
}
