use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;

/// Default English stopword list, one term per line.
pub const ENGLISH_STOPWORDS: &str = include_str!("english_stopwords.txt");

/// Parses a stopword list: one term per line, blank lines and `#` comments
/// ignored, terms lowercased.
pub fn parse_stopwords(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(lowercase)
        .collect()
}

fn lowercase(s: &str) -> String {
    s.chars().flat_map(char::to_lowercase).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    /// Minimum token length in characters.
    pub min_token_len: usize,
    pub stopwords: BTreeSet<String>,
    pub strip_urls: bool,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self {
            lowercase: true,
            min_token_len: 2,
            stopwords: parse_stopwords(ENGLISH_STOPWORDS),
            strip_urls: true,
        }
    }
}

impl TokenizerConfig {
    pub fn without_stopwords() -> Self {
        Self {
            stopwords: BTreeSet::new(),
            ..Self::default()
        }
    }

    pub fn with_stopwords<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            stopwords: words.into_iter().map(|w| lowercase(w.as_ref())).collect(),
            ..Self::default()
        }
    }
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Byte offset where a URL starts inside a whitespace-free chunk.
fn url_start(chunk: &str) -> Option<usize> {
    let lower = chunk.to_ascii_lowercase();
    ["http://", "https://", "www."].iter().filter_map(|p| lower.find(p)).min()
}

/// Splits text into alphabetic runs (apostrophes allowed between letters),
/// then applies case folding, URL removal, and the length and stopword
/// filters.
pub fn tokenize(text: &str, config: &TokenizerConfig) -> Vec<String> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        let chunk = match (config.strip_urls, url_start(chunk)) {
            (true, Some(p)) => &chunk[..p],
            _ => chunk,
        };
        let chars: Vec<char> = chunk.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            if !chars[i].is_alphabetic() {
                i += 1;
                continue;
            }
            let start = i;
            while i < chars.len() {
                if chars[i].is_alphabetic() {
                    i += 1;
                } else if is_apostrophe(chars[i]) && i + 1 < chars.len() && chars[i + 1].is_alphabetic() {
                    i += 1;
                } else {
                    break;
                }
            }
            let mut token = String::new();
            for &c in &chars[start..i] {
                let c = if is_apostrophe(c) { '\'' } else { c };
                if config.lowercase {
                    token.extend(c.to_lowercase());
                } else {
                    token.push(c);
                }
            }
            if token.chars().count() >= config.min_token_len && !config.stopwords.contains(&token) {
                out.push(token);
            }
        }
    }
    out
}

/// A tokenized document with its row identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentTokens {
    pub id: String,
    pub community: String,
    pub tokens: Vec<String>,
}

impl DocumentTokens {
    pub fn new(id: impl Into<String>, community: impl Into<String>, tokens: Vec<String>) -> Self {
        Self {
            id: id.into(),
            community: community.into(),
            tokens,
        }
    }
}

pub fn tokenize_corpus(corpus: &Corpus, config: &TokenizerConfig) -> Vec<DocumentTokens> {
    corpus
        .submissions()
        .iter()
        .map(|s| DocumentTokens::new(s.id.clone(), s.community.clone(), tokenize(&s.text(), config)))
        .collect()
}
