//! The two experiments, from corpus file to reports.
//!
//! Both share one topic space. The fitted LDA model is cached under
//! `<output>/cache`, keyed by the vocabulary, the counts and the LDA
//! settings, so running `exp2` after `exp1` skips the fit.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use semspan_core::corpus::{Corpus, SyntheticSpec, CommunityPlan, QualityCount, QualitySpec};
use semspan_core::semspace::{community_centroid, semantic_span, Centroid, NodeLabel, SemanticSpan};
use semspan_core::simgraph::{assign_documents, build_graph, connected_components, SimilarityGraph, SubGraph};
use semspan_core::text::{build_vocabulary, tfidf, tokenize_corpus, top_terms, vectorize_counts, DocTermMatrix, TfidfMatrix, TokenizerConfig, Vocabulary};
use semspan_core::topics::{fit_lda, infer_theta, DocTopicMatrix, LdaModel};

use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::formats::graph::{graph_dot, graph_json};
use crate::formats::model::{read_model, write_model};
use crate::formats::span::{file_stem, metrics_csv, span_json};
use crate::hash::{counts_hash, tokenizer_hash, vocabulary_hash};
use crate::jsonl::{corpus_fingerprint, load_jsonl};
use crate::report::{ComponentRow, ExperimentReport, PairView, Provenance, SimilarityTable, SpanRow, TermScore};
use crate::write_string;

/// Corpus and count matrix, ready for topic modeling.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub corpus: Corpus,
    pub skipped: usize,
    pub tokenizer: TokenizerConfig,
    pub vocab: Vocabulary,
    pub counts: DocTermMatrix,
    pub fingerprint: String,
}

impl Prepared {
    pub fn from_corpus(corpus: Corpus, skipped: usize, config: &PipelineConfig) -> Result<Self> {
        if corpus.is_empty() {
            return Err(Error::Data("corpus has no valid submissions".into()));
        }
        let tokenizer = config.tokenizer_config()?;
        let docs = tokenize_corpus(&corpus, &tokenizer);
        let vocab = build_vocabulary(&docs, config.vocab_params())?;
        let counts = vectorize_counts(&docs, &vocab)?;
        let fingerprint = corpus_fingerprint(&corpus);
        Ok(Self {
            corpus,
            skipped,
            tokenizer,
            vocab,
            counts,
            fingerprint,
        })
    }

    pub fn vocabulary_hash(&self) -> String {
        vocabulary_hash(&self.vocab)
    }
}

/// Loads, tokenizes and counts the configured corpus.
pub fn prepare(config: &PipelineConfig) -> Result<Prepared> {
    let loaded = load_jsonl(&config.input, config.strict)?;
    let skipped = loaded.skip_count();
    Prepared::from_corpus(loaded.corpus, skipped, config)
}

#[derive(Debug, Clone)]
pub struct TopicSpace {
    pub model: LdaModel,
    pub theta: DocTopicMatrix,
    pub cache_hit: bool,
}

pub fn cache_path(config: &PipelineConfig, prepared: &Prepared) -> PathBuf {
    let mut h = Sha256::new();
    h.update(prepared.vocabulary_hash());
    h.update(b"\n");
    h.update(counts_hash(&prepared.counts));
    h.update(b"\n");
    h.update(serde_json::to_vec(&config.lda_config()).expect("config serializes"));
    let key: String = h.finalize().iter().take(12).map(|b| format!("{b:02x}")).collect();
    config.output.join("cache").join(format!("lda-{key}.json"))
}

fn cached_model(path: &Path, config: &PipelineConfig, vocab_hash: &str) -> Option<LdaModel> {
    if !path.exists() {
        return None;
    }
    let want = config.lda_config();
    match read_model(path, vocab_hash) {
        Ok(m) if m.k == want.k && m.alpha == want.alpha && m.beta == want.beta && m.iterations == want.iterations && m.seed == want.seed => Some(m),
        Ok(_) => {
            log::warn!("{}: cached model has other settings; refitting", path.display());
            None
        }
        Err(e) => {
            log::warn!("ignoring cached model: {e}");
            None
        }
    }
}

/// Fits (or reuses) the shared LDA model and infers every document's topic
/// proportions.
pub fn topic_space(config: &PipelineConfig, prepared: &Prepared, use_cache: bool) -> Result<TopicSpace> {
    let vocab_hash = prepared.vocabulary_hash();
    let path = cache_path(config, prepared);
    let cached = if use_cache { cached_model(&path, config, &vocab_hash) } else { None };
    let cache_hit = cached.is_some();
    let model = match cached {
        Some(m) => {
            log::info!("reusing topic model {}", path.display());
            m
        }
        None => {
            let c = config.lda_config();
            log::info!("fitting LDA: k={}, {} sweeps, {} documents", c.k, c.iterations, prepared.counts.n_docs());
            let m = fit_lda(&prepared.counts, &c)?;
            if use_cache {
                write_model(&m, &vocab_hash, &path)?;
            }
            m
        }
    };
    let theta = infer_theta(&model, &prepared.counts, config.lda.infer_iterations, config.seed)?;
    Ok(TopicSpace { model, theta, cache_hit })
}

/// Everything one experiment produced.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub report: ExperimentReport,
    pub graph: SimilarityGraph,
    pub components: Vec<SubGraph>,
    pub spans: Vec<SemanticSpan>,
    /// Per-pair overlap graphs, in the order of `report.pairs`.
    pub pairs: Vec<(SimilarityGraph, Vec<SubGraph>)>,
}

fn provenance(config: &PipelineConfig, prepared: &Prepared) -> Provenance {
    Provenance {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config_hash: config.hash(),
        tokenizer_hash: tokenizer_hash(&prepared.tokenizer),
        vocabulary_hash: prepared.vocabulary_hash(),
        corpus_fingerprint: prepared.fingerprint.clone(),
        seed: config.seed,
        k: config.lda.k,
        documents: prepared.counts.n_docs(),
        vocabulary_size: prepared.vocab.len(),
        skipped_lines: prepared.skipped,
    }
}

fn component_rows(graph: &SimilarityGraph, subs: &[SubGraph], pooled: &[Vec<usize>], terms: &[Vec<(String, f64)>]) -> Vec<ComponentRow> {
    subs.iter()
        .enumerate()
        .map(|(i, s)| ComponentRow {
            index: i + 1,
            kind: s.kind,
            nodes: s.members.iter().map(|&m| graph.nodes[m].to_string()).collect(),
            communities: s.communities.iter().cloned().collect(),
            edges: s.edge_count,
            documents: pooled.get(i).map_or(0, Vec::len),
            top_terms: terms
                .get(i)
                .map(|t| t.iter().map(|(term, score)| TermScore { term: term.clone(), score: *score }).collect())
                .unwrap_or_default(),
        })
        .collect()
}

fn labeled_terms(pooled: &[Vec<usize>], weights: &TfidfMatrix, vocab: &Vocabulary, n: usize) -> Result<Vec<Vec<(String, f64)>>> {
    pooled.iter().map(|docs| Ok(top_terms(docs, weights, vocab, n)?)).collect()
}

fn require_communities(prepared: &Prepared) -> Result<()> {
    let n = prepared.corpus.communities().len();
    if n < 2 {
        return Err(Error::Data(format!("need at least 2 communities, found {n}")));
    }
    Ok(())
}

/// Community centroids and their similarity graph at `thresholds.exp1`.
pub fn exp1(config: &PipelineConfig, prepared: &Prepared, space: &TopicSpace) -> Result<Experiment> {
    require_communities(prepared)?;
    let theta = &space.theta;
    let mut centroids: Vec<Centroid> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for community in prepared.corpus.communities() {
        let rows = theta.rows_of(community);
        centroids.push(community_centroid(&theta.theta.select_rows(&rows), NodeLabel::community(community.clone()))?);
        members.push(rows);
    }
    let graph = build_graph(&centroids, config.thresholds.exp1)?;
    let components = connected_components(&graph);
    let pooled: Vec<Vec<usize>> = components
        .iter()
        .map(|s| {
            let mut docs: Vec<usize> = s.members.iter().flat_map(|&m| members[m].iter().copied()).collect();
            docs.sort_unstable();
            docs
        })
        .collect();
    let weights = tfidf(&prepared.counts)?;
    let terms = labeled_terms(&pooled, &weights, &prepared.vocab, config.top_words)?;
    let report = ExperimentReport {
        experiment: "exp1".into(),
        provenance: provenance(config, prepared),
        similarity: SimilarityTable::of(&graph),
        components: component_rows(&graph, &components, &pooled, &terms),
        spans: Vec::new(),
        pairs: Vec::new(),
    };
    Ok(Experiment {
        report,
        graph,
        components,
        spans: Vec::new(),
        pairs: Vec::new(),
    })
}

/// Computes every community's semantic span, in parallel.
pub fn spans(config: &PipelineConfig, prepared: &Prepared, space: &TopicSpace) -> Result<Vec<SemanticSpan>> {
    let params = config.span_params();
    let theta = &space.theta;
    prepared
        .corpus
        .communities()
        .par_iter()
        .map(|community| {
            let rows = theta.rows_of(community);
            Ok(semantic_span(community, &theta.theta.select_rows(&rows), rows, &params)?)
        })
        .collect()
}

fn span_row(s: &SemanticSpan) -> SpanRow {
    let silhouette = s.selection.candidates.iter().find(|m| m.c == s.selection.chosen).map(|m| m.silhouette);
    SpanRow {
        community: s.community.clone(),
        documents: s.documents.len(),
        c: s.c(),
        rule: s.selection.rule,
        silhouette,
    }
}

/// Semantic spans, the all-span graph at `thresholds.all` with labeled
/// sub-graphs, and pairwise overlap graphs at `thresholds.span`.
pub fn exp2(config: &PipelineConfig, prepared: &Prepared, space: &TopicSpace) -> Result<Experiment> {
    let spans = spans(config, prepared, space)?;
    let centroids: Vec<Centroid> = spans.iter().flat_map(SemanticSpan::labeled_centroids).collect();
    let graph = build_graph(&centroids, config.thresholds.all)?;
    let components = connected_components(&graph);
    let pooled: Vec<Vec<usize>> = components.iter().map(|s| assign_documents(s, &graph, &spans)).collect::<Result<_, _>>()?;
    let weights = tfidf(&prepared.counts)?;
    let terms = labeled_terms(&pooled, &weights, &prepared.vocab, config.top_words)?;

    let mut pair_views = Vec::new();
    let mut pairs = Vec::new();
    for (i, a) in spans.iter().enumerate() {
        for b in &spans[i + 1..] {
            let mut cs = a.labeled_centroids();
            cs.extend(b.labeled_centroids());
            let g = build_graph(&cs, config.thresholds.span)?;
            let subs = connected_components(&g);
            let pooled: Vec<Vec<usize>> = subs.iter().map(|s| assign_documents(s, &g, &spans)).collect::<Result<_, _>>()?;
            let na = a.c();
            let mut max_cross = f64::NEG_INFINITY;
            for x in 0..na {
                for y in na..g.len() {
                    max_cross = max_cross.max(g.sim.get(x, y));
                }
            }
            pair_views.push(PairView {
                communities: [a.community.clone(), b.community.clone()],
                tau: g.tau,
                nodes: g.len(),
                cross_edges: g.edges.iter().filter(|&&(x, y)| (x < na) != (y < na)).count(),
                max_cross_similarity: max_cross,
                components: component_rows(&g, &subs, &pooled, &[]),
            });
            pairs.push((g, subs));
        }
    }

    let report = ExperimentReport {
        experiment: "exp2".into(),
        provenance: provenance(config, prepared),
        similarity: SimilarityTable::of(&graph),
        components: component_rows(&graph, &components, &pooled, &terms),
        spans: spans.iter().map(span_row).collect(),
        pairs: pair_views,
    };
    Ok(Experiment {
        report,
        graph,
        components,
        spans,
        pairs,
    })
}

/// Writes `report.json`, `report.txt`, `graph.dot`, `graph.json`, and for
/// experiments with spans `spans/*.json`, `metrics/*.csv` and
/// `pairs/*.{dot,json}`.
pub fn write_experiment(exp: &Experiment, prepared: &Prepared, dir: &Path) -> Result<()> {
    write_string(&dir.join("report.json"), &exp.report.to_json())?;
    write_string(&dir.join("report.txt"), &exp.report.to_text())?;
    write_string(&dir.join("graph.dot"), &graph_dot(&exp.graph, &exp.components))?;
    write_string(&dir.join("graph.json"), &graph_json(&exp.graph, &exp.components))?;
    for span in &exp.spans {
        let stem = file_stem(&span.community);
        write_string(&dir.join("spans").join(format!("{stem}.json")), &span_json(span, &prepared.counts.rows))?;
        write_string(&dir.join("metrics").join(format!("{stem}.csv")), &metrics_csv(span))?;
    }
    for (view, (g, subs)) in exp.report.pairs.iter().zip(&exp.pairs) {
        let stem = format!("{}__{}", file_stem(&view.communities[0]), file_stem(&view.communities[1]));
        write_string(&dir.join("pairs").join(format!("{stem}.dot")), &graph_dot(g, subs))?;
        write_string(&dir.join("pairs").join(format!("{stem}.json")), &graph_json(g, subs))?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Exp1,
    Exp2,
}

impl Which {
    pub fn name(self) -> &'static str {
        match self {
            Which::Exp1 => "exp1",
            Which::Exp2 => "exp2",
        }
    }
}

/// Runs one experiment end to end and writes it to `<output>/exp1` or
/// `<output>/exp2`.
pub fn run(config: &PipelineConfig, which: Which) -> Result<Experiment> {
    let prepared = prepare(config)?;
    let space = topic_space(config, &prepared, true)?;
    let exp = match which {
        Which::Exp1 => exp1(config, &prepared, &space)?,
        Which::Exp2 => exp2(config, &prepared, &space)?,
    };
    check_experiment(&exp, &prepared)?;
    write_experiment(&exp, &prepared, &config.output.join(which.name()))?;
    Ok(exp)
}

/// Cross-checks that the pooled documents of the all-span graph partition
/// the corpus; a failure here is a bug, not bad input.
fn check_experiment(exp: &Experiment, prepared: &Prepared) -> Result<()> {
    let total: usize = exp.report.components.iter().map(|c| c.documents).sum();
    if total != prepared.counts.n_docs() {
        return Err(Error::Invariant(format!(
            "sub-graphs pool {total} documents, corpus has {}",
            prepared.counts.n_docs()
        )));
    }
    Ok(())
}

/// The spec `semspan synth` uses when given none: four communities, one
/// quality shared by all, one by the first two, one only in the third.
pub fn example_spec(seed: u64) -> SyntheticSpec {
    let quality = |label: &str, mixture: Vec<f64>| QualitySpec {
        label: label.into(),
        mixture,
    };
    let plan = |label: &str, docs: &[(&str, usize)]| CommunityPlan {
        label: label.into(),
        documents: docs.iter().map(|&(q, count)| QualityCount { quality: q.into(), count }).collect(),
    };
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
