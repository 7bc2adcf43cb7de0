//! Experiment reports in JSON and plain text.
//!
//! Reports carry no timestamps or absolute paths, so reruns with the same
//! corpus and config produce identical bytes.

use std::fmt::Write as _;

use serde::Serialize;

use semspan_core::semspace::SelectionRule;
use semspan_core::simgraph::{SimilarityGraph, SubGraphKind};

use crate::formats::to_json_string;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub config_hash: String,
    pub tokenizer_hash: String,
    pub vocabulary_hash: String,
    pub corpus_fingerprint: String,
    pub seed: u64,
    pub k: usize,
    pub documents: usize,
    pub vocabulary_size: usize,
    pub skipped_lines: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityTable {
    pub tau: f64,
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
}

impl SimilarityTable {
    pub fn of(graph: &SimilarityGraph) -> Self {
        Self {
            tau: graph.tau,
            labels: graph.nodes.iter().map(ToString::to_string).collect(),
            matrix: graph.sim.iter_rows().map(<[f64]>::to_vec).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermScore {
    pub term: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentRow {
    /// 1-based, in component order.
    pub index: usize,
    pub kind: SubGraphKind,
    pub nodes: Vec<String>,
    pub communities: Vec<String>,
    pub edges: usize,
    pub documents: usize,
    pub top_terms: Vec<TermScore>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpanRow {
    pub community: String,
    pub documents: usize,
    pub c: usize,
    pub rule: SelectionRule,
    /// Silhouette of the chosen count; absent when one cluster was used.
    pub silhouette: Option<f64>,
}

/// Overlap between two communities' spans.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairView {
    pub communities: [String; 2],
    pub tau: f64,
    pub nodes: usize,
    /// Edges joining a node of one community to a node of the other.
    pub cross_edges: usize,
    pub max_cross_similarity: f64,
    pub components: Vec<ComponentRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub provenance: Provenance,
    pub similarity: SimilarityTable,
    pub components: Vec<ComponentRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub spans: Vec<SpanRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<PairView>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        to_json_string(self)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let p = &self.provenance;
        let _ = writeln!(out, "{} report", self.experiment);
        let _ = writeln!(out, "{} {}", p.tool, p.version);
        let _ = writeln!(out, "config      {}", p.config_hash);
        let _ = writeln!(out, "tokenizer   {}", p.tokenizer_hash);
        let _ = writeln!(out, "vocabulary  {}", p.vocabulary_hash);
        let _ = writeln!(out, "corpus      {}", p.corpus_fingerprint);
        let _ = writeln!(
            out,
            "seed {}, k {}, {} documents, {} terms, {} skipped lines",
            p.seed, p.k, p.documents, p.vocabulary_size, p.skipped_lines
        );
        out.push('\n');

        if !self.spans.is_empty() {
            out.push_str("Semantic spans\n");
            let w = self.spans.iter().map(|s| s.community.len()).max().unwrap_or(0).max(9);
            let _ = writeln!(out, "{:<w$}  {:>9}  {:>3}  {:>10}  rule", "community", "documents", "c", "silhouette");
            for s in &self.spans {
                let sil = s.silhouette.map_or_else(|| "-".to_string(), |x| format!("{x:.4}"));
                let rule = serde_json::to_value(s.rule).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                let _ = writeln!(out, "{:<w$}  {:>9}  {:>3}  {:>10}  {rule}", s.community, s.documents, s.c, sil);
            }
            out.push('\n');
        }

        let t = &self.similarity;
        let _ = writeln!(out, "Cosine similarity (edges at >= {})", t.tau);
        let w = t.labels.iter().map(String::len).max().unwrap_or(0).max(6);
        let _ = write!(out, "{:<w$}", "");
        for l in &t.labels {
            let _ = write!(out, "  {l:>w$}");
        }
        out.push('\n');
        for (l, row) in t.labels.iter().zip(&t.matrix) {
            let _ = write!(out, "{l:<w$}");
            for x in row {
                let _ = write!(out, "  {x:>w$.4}");
            }
            out.push('\n');
        }
        out.push('\n');

        out.push_str("Sub-graphs\n");
        write_components(&mut out, &self.components);

        for pair in &self.pairs {
            let _ = writeln!(
                out,
                "\nOverlap {} / {} (tau {}): {} nodes, {} cross edges, max cross similarity {:.4}",
                pair.communities[0], pair.communities[1], pair.tau, pair.nodes, pair.cross_edges, pair.max_cross_similarity
            );
            write_components(&mut out, &pair.components);
        }
        out
    }
}

fn kind_name(kind: SubGraphKind) -> &'static str {
    match kind {
        SubGraphKind::Clique => "clique",
        SubGraphKind::Partial => "partial",
        SubGraphKind::Singleton => "singleton",
    }
}

fn write_components(out: &mut String, rows: &[ComponentRow]) {
    for r in rows {
        let _ = writeln!(
            out,
            "{:>3}. {:<9} nodes [{}] communities [{}] edges {} documents {}",
            r.index,
            kind_name(r.kind),
            r.nodes.join(", "),
            r.communities.join(", "),
            r.edges,
            r.documents
        );
        if !r.top_terms.is_empty() {
            let terms: Vec<&str> = r.top_terms.iter().map(|t| t.term.as_str()).collect();
            let _ = writeln!(out, "     top terms: {}", terms.join(", "));
        }
    }
}
