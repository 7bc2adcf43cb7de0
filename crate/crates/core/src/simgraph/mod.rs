//! Thresholded cosine-similarity graphs over labeled centroids.
//!
//! An edge joins two nodes whose similarity is at least the threshold. The
//! connected components are the unit of analysis; each is classified as a
//! clique (every pair joined), a singleton, or partial (anything else).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::DenseMatrix;
use crate::semspace::{cosine_sim, Centroid, GeometryError, NodeLabel, SemanticSpan};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("node label {0} appears more than once")]
    DuplicateLabel(String),
    #[error("centroid {label} has dimension {found}, expected {expected}")]
    DimensionMismatch { label: String, expected: usize, found: usize },
    #[error("threshold must be a number")]
    InvalidThreshold,
    #[error("similarity matrix is {rows}x{cols} for {nodes} nodes")]
    MatrixShape { rows: usize, cols: usize, nodes: usize },
    #[error("no span provides node {0}")]
    UnknownNode(String),
    #[error("node index {0} is out of range")]
    NodeOutOfRange(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityGraph {
    pub nodes: Vec<NodeLabel>,
    /// Symmetric `n x n` cosine similarities, unit diagonal.
    pub sim: DenseMatrix,
    pub tau: f64,
    /// Pairs `(i, j)` with `i < j` and `sim >= tau`, lexicographically sorted.
    pub edges: Vec<(usize, usize)>,
}

impl SimilarityGraph {
    /// Rebuilds a graph from labels and a precomputed similarity matrix.
    pub fn from_similarities(nodes: Vec<NodeLabel>, sim: DenseMatrix, tau: f64) -> Result<Self, GraphError> {
        if tau.is_nan() {
            return Err(GraphError::InvalidThreshold);
        }
        let n = nodes.len();
        if sim.rows() != n || sim.cols() != n {
            return Err(GraphError::MatrixShape {
                rows: sim.rows(),
                cols: sim.cols(),
                nodes: n,
            });
        }
        let mut seen = BTreeSet::new();
        for l in &nodes {
            if !seen.insert(l) {
                return Err(GraphError::DuplicateLabel(alloc::format!("{l}")));
            }
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if sim.get(i, j) >= tau {
                    edges.push((i, j));
                }
            }
        }
        Ok(Self { nodes, sim, tau, edges })
    }

    /// The same nodes and similarities cut at another threshold.
    pub fn with_threshold(&self, tau: f64) -> Result<Self, GraphError> {
        Self::from_similarities(self.nodes.clone(), self.sim.clone(), tau)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let key = if i < j { (i, j) } else { (j, i) };
        self.edges.binary_search(&key).is_ok()
    }

    pub fn index_of(&self, label: &NodeLabel) -> Option<usize> {
        self.nodes.iter().position(|l| l == label)
    }
}

/// Pairwise cosine similarities of the centroids, thresholded at `tau`
/// (inclusive).
pub fn build_graph(centroids: &[Centroid], tau: f64) -> Result<SimilarityGraph, GraphError> {
    let n = centroids.len();
    if let Some(first) = centroids.first() {
        let dim = first.vector.len();
        if let Some(bad) = centroids.iter().find(|c| c.vector.len() != dim) {
            return Err(GraphError::DimensionMismatch {
                label: alloc::format!("{}", bad.label),
                expected: dim,
                found: bad.vector.len(),
            });
        }
    }
    if centroids.iter().any(|c| c.vector.iter().all(|&x| x == 0.0)) {
        return Err(GeometryError::ZeroVector.into());
    }
    let mut sim = DenseMatrix::zeros(n, n);
    for i in 0..n {
        sim.set(i, i, 1.0);
        for j in i + 1..n {
            let s = cosine_sim(&centroids[i].vector, &centroids[j].vector)?;
            sim.set(i, j, s);
            sim.set(j, i, s);
        }
    }
    SimilarityGraph::from_similarities(centroids.iter().map(|c| c.label.clone()).collect(), sim, tau)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubGraphKind {
    Clique,
    Partial,
    Singleton,
}

/// One connected component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubGraph {
    /// Node indices, ascending.
    pub members: Vec<usize>,
    pub kind: SubGraphKind,
    pub communities: BTreeSet<String>,
    pub edge_count: usize,
}

impl SubGraph {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Connected components, ordered by their smallest member label.
pub fn connected_components(graph: &SimilarityGraph) -> Vec<SubGraph> {
    let n = graph.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for &(i, j) in &graph.edges {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    let mut edge_counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &(i, _) in &graph.edges {
        *edge_counts.entry(find(&mut parent, i)).or_default() += 1;
    }
    let mut subs: Vec<SubGraph> = groups
        .into_iter()
        .map(|(root, members)| {
            let m = members.len();
            let edge_count = edge_counts.get(&root).copied().unwrap_or(0);
            let kind = if m == 1 {
                SubGraphKind::Singleton
            } else if edge_count == m * (m - 1) / 2 {
                SubGraphKind::Clique
            } else {
                SubGraphKind::Partial
            };
            let communities = members.iter().map(|&i| graph.nodes[i].community.clone()).collect();
            SubGraph {
                members,
                kind,
                communities,
                edge_count,
            }
        })
        .collect();
    subs.sort_by(|a, b| {
        let min = |s: &SubGraph| s.members.iter().map(|&i| &graph.nodes[i]).min().cloned();
        min(a).cmp(&min(b))
    });
    subs
}

/// Pools the documents behind every node of a component.
///
/// A node labeled with a cluster contributes that cluster's documents; a
/// community-level node contributes all of its span's documents. Returns
/// global row indices, ascending.
pub fn assign_documents(sub: &SubGraph, graph: &SimilarityGraph, spans: &[SemanticSpan]) -> Result<Vec<usize>, GraphError> {
    let mut docs = BTreeSet::new();
    for &i in &sub.members {
        let label = graph.nodes.get(i).ok_or(GraphError::NodeOutOfRange(i))?;
        let unknown = || GraphError::UnknownNode(alloc::format!("{label}"));
        let span = spans.iter().find(|s| s.community == label.community).ok_or_else(unknown)?;
        match label.cluster {
            Some(c) if c < span.c() => docs.extend(span.cluster_documents(c)),
            Some(_) => return Err(unknown()),
            None => docs.extend(span.documents.iter().copied()),
        }
    }
    Ok(docs.into_iter().collect())
}

/// Component statistics at one threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub tau: f64,
    pub edges: usize,
    pub components: usize,
    pub cliques: usize,
    pub partials: usize,
    pub singletons: usize,
}

/// Re-cuts the graph at each threshold and counts components by kind.
pub fn tau_sweep(graph: &SimilarityGraph, taus: &[f64]) -> Result<Vec<SweepRow>, GraphError> {
    taus.iter()
        .map(|&tau| {
            let g = graph.with_threshold(tau)?;
            let subs = connected_components(&g);
            let count = |k| subs.iter().filter(|s| s.kind == k).count();
            Ok(SweepRow {
                tau,
                edges: g.edges.len(),
                components: subs.len(),
                cliques: count(SubGraphKind::Clique),
                partials: count(SubGraphKind::Partial),
                singletons: count(SubGraphKind::Singleton),
            })
        })
        .collect()
}
