//! Pipeline configuration, read from TOML.
//!
//! ```toml
//! input = "corpus.jsonl"
//! output = "out"
//! seed = 0
//! top_words = 10
//!
//! [vocab]
//! min_df = 2
//! stopwords = "stopwords.txt"   # optional; the built-in English list otherwise
//!
//! [lda]
//! k = 20
//!
//! [thresholds]
//! exp1 = 0.95
//! span = 0.7
//! all = 0.9
//! ```
//!
//! Every key is optional except `input`. Relative paths are resolved against
//! the directory holding the config file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use semspan_core::semspace::SpanParams;
use semspan_core::text::{TokenizerConfig, VocabParams};
use semspan_core::topics::LdaConfig;

use crate::error::{Error, Result};
use crate::formats::load_stopwords;
use crate::hash::sha256_hex;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TokenizerSection {
    pub lowercase: bool,
    pub min_token_len: usize,
    pub strip_urls: bool,
}

impl Default for TokenizerSection {
    fn default() -> Self {
        let d = TokenizerConfig::default();
        Self {
            lowercase: d.lowercase,
            min_token_len: d.min_token_len,
            strip_urls: d.strip_urls,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VocabSection {
    pub min_df: usize,
    pub max_df_ratio: f64,
    /// One term per line. `None` uses the built-in English list.
    pub stopwords: Option<PathBuf>,
}

impl Default for VocabSection {
    fn default() -> Self {
        let d = VocabParams::default();
        Self {
            min_df: d.min_df,
            max_df_ratio: d.max_df_ratio,
            stopwords: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LdaSection {
    pub k: usize,
    /// Defaults to `50 / k`.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
    pub infer_iterations: usize,
}

impl Default for LdaSection {
    fn default() -> Self {
        Self {
            k: 20,
            alpha: None,
            beta: 0.01,
            iterations: 1000,
            infer_iterations: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpanSection {
    pub c_min: usize,
    pub c_max: usize,
    pub restarts: usize,
    pub min_silhouette: f64,
}

impl Default for SpanSection {
    fn default() -> Self {
        let d = SpanParams::default();
        Self {
            c_min: d.c_min,
            c_max: d.c_max,
            restarts: d.restarts,
            min_silhouette: d.min_silhouette,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// Community centroid graph.
    pub exp1: f64,
    /// Pairwise span overlap views.
    pub span: f64,
    /// Graph over every community's span.
    pub all: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            exp1: 0.95,
            span: 0.7,
            all: 0.9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub input: PathBuf,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    /// Abort on the first malformed corpus line instead of skipping it.
    #[serde(default)]
    pub strict: bool,
    /// Seeds topic fitting, inference and clustering.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_top_words")]
    pub top_words: usize,
    #[serde(default)]
    pub tokenizer: TokenizerSection,
    #[serde(default)]
    pub vocab: VocabSection,
    #[serde(default)]
    pub lda: LdaSection,
    #[serde(default)]
    pub span: SpanSection,
    #[serde(default)]
    pub thresholds: Thresholds,
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

fn default_top_words() -> usize {
    10
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    pub k: Option<usize>,
    /// Replaces the threshold of the graph the command builds.
    pub tau: Option<f64>,
    pub top_words: Option<usize>,
}

impl PipelineConfig {
    /// Defaults everywhere, reading `input`.
    pub fn new(input: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            output: default_output(),
            strict: false,
            seed: 0,
            top_words: default_top_words(),
            tokenizer: TokenizerSection::default(),
            vocab: VocabSection::default(),
            lda: LdaSection::default(),
            span: SpanSection::default(),
            thresholds: Thresholds::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    /// Reads and validates a config file, resolving relative paths against
    /// its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut config = Self::from_toml(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        resolve(&mut config.input);
        resolve(&mut config.output);
        if let Some(p) = config.vocab.stopwords.as_mut() {
            resolve(p);
        }
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Applies flag overrides. `tau` is routed to the threshold named by
    /// `tau_target` (one of `exp1`, `span`, `all`).
    pub fn apply(&mut self, o: &Overrides, tau_target: &str) -> Result<()> {
        if let Some(p) = &o.input {
            self.input.clone_from(p);
        }
        if let Some(p) = &o.output {
            self.output.clone_from(p);
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(k) = o.k {
            self.lda.k = k;
        }
        if let Some(n) = o.top_words {
            self.top_words = n;
        }
        if let Some(t) = o.tau {
            match tau_target {
                "exp1" => self.thresholds.exp1 = t,
                "span" => self.thresholds.span = t,
                "all" => self.thresholds.all = t,
                other => return Err(Error::Config(format!("unknown threshold {other:?}"))),
            }
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.thresholds;
        for (name, tau) in [("exp1", t.exp1), ("span", t.span), ("all", t.all)] {
            if !(0.0..=1.0).contains(&tau) {
                return Err(Error::Config(format!("threshold {name} = {tau} is outside [0, 1]")));
            }
        }
        if self.lda.k == 0 {
            return Err(Error::Config("lda.k must be at least 1".into()));
        }
        if let Some(a) = self.lda.alpha {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::Config(format!("lda.alpha = {a} must be positive")));
            }
        }
        if !(self.lda.beta > 0.0 && self.lda.beta.is_finite()) {
            return Err(Error::Config(format!("lda.beta = {} must be positive", self.lda.beta)));
        }
        if !(self.vocab.max_df_ratio > 0.0 && self.vocab.max_df_ratio <= 1.0) {
            return Err(Error::Config(format!("vocab.max_df_ratio = {} is outside (0, 1]", self.vocab.max_df_ratio)));
        }
        if self.span.c_min > self.span.c_max {
            return Err(Error::Config(format!("span.c_min = {} exceeds span.c_max = {}", self.span.c_min, self.span.c_max)));
        }
        if self.span.restarts == 0 {
            return Err(Error::Config("span.restarts must be at least 1".into()));
        }
        if self.top_words == 0 {
            return Err(Error::Config("top_words must be at least 1".into()));
        }
        Ok(())
    }

    /// SHA-256 of the canonical TOML form with `input` and `output` blanked,
    /// since the corpus fingerprint already identifies the data and the
    /// output location does not affect results.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.input = PathBuf::new();
        c.output = PathBuf::new();
        sha256_hex(c.to_toml().as_bytes())
    }

    pub fn tokenizer_config(&self) -> Result<TokenizerConfig> {
        let mut t = TokenizerConfig {
            lowercase: self.tokenizer.lowercase,
            min_token_len: self.tokenizer.min_token_len,
            strip_urls: self.tokenizer.strip_urls,
            ..TokenizerConfig::default()
        };
        if let Some(p) = &self.vocab.stopwords {
            t.stopwords = load_stopwords(p).map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(t)
    }

    pub fn vocab_params(&self) -> VocabParams {
        VocabParams {
            min_df: self.vocab.min_df,
            max_df_ratio: self.vocab.max_df_ratio,
        }
    }

    pub fn lda_config(&self) -> LdaConfig {
        let mut c = LdaConfig::new(self.lda.k);
        if let Some(a) = self.lda.alpha {
            c.alpha = a;
        }
        c.beta = self.lda.beta;
        c.iterations = self.lda.iterations;
        c.seed = self.seed;
        c
    }

    pub fn span_params(&self) -> SpanParams {
        SpanParams {
            c_min: self.span.c_min,
            c_max: self.span.c_max,
            seed: self.seed,
            restarts: self.span.restarts,
            min_silhouette: self.span.min_silhouette,
        }
    }
}
