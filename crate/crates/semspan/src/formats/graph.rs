//! Similarity graph exports.
//!
//! JSON schema:
//!
//! ```text
//! {
//!   "nodes": [{"label": "A#0", "community": "A", "cluster": 0}, ...],
//!   "tau": 0.9,
//!   "sim": [[1.0, ...], ...],
//!   "edges": [[0, 3], ...],
//!   "components": [{"members": [0, 3], "kind": "clique"}, ...]
//! }
//! ```
//!
//! `cluster` is `null` for community-level nodes. Importing recomputes the
//! edges and components from `sim` and `tau` and rejects a file whose stored
//! ones disagree.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use semspan_core::semspace::NodeLabel;
use semspan_core::simgraph::{connected_components, SimilarityGraph, SubGraph, SubGraphKind};
use semspan_core::DenseMatrix;

use super::to_json_string;
use crate::error::{Error, Result};

/// Fill colors cycled over communities in order of first appearance.
const PALETTE: [&str; 12] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f",
];

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn kind_name(kind: SubGraphKind) -> &'static str {
    match kind {
        SubGraphKind::Clique => "clique",
        SubGraphKind::Partial => "partial",
        SubGraphKind::Singleton => "singleton",
    }
}

/// Graphviz source: nodes filled by community, one `cluster_*` subgraph per
/// connected component, edges labeled with their similarity.
pub fn graph_dot(graph: &SimilarityGraph, subs: &[SubGraph]) -> String {
    let mut colors: BTreeMap<&str, &str> = BTreeMap::new();
    for n in &graph.nodes {
        let next = PALETTE[colors.len() % PALETTE.len()];
        colors.entry(n.community.as_str()).or_insert(next);
    }
    let mut out = String::new();
    out.push_str("graph similarity {\n");
    let _ = writeln!(out, "  // tau = {}", graph.tau);
    out.push_str("  node [shape=ellipse, style=filled];\n");
    for (c, sub) in subs.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{c} {{");
        let _ = writeln!(out, "    label=\"{} {} ({})\";", kind_name(sub.kind), c + 1, sub.communities.len());
        for &i in &sub.members {
            let n = &graph.nodes[i];
            let _ = writeln!(
                out,
                "    n{i} [label=\"{}\", fillcolor=\"{}\"];",
                escape(&n.to_string()),
                colors[n.community.as_str()]
            );
        }
        out.push_str("  }\n");
    }
    for &(i, j) in &graph.edges {
        let _ = writeln!(out, "  n{i} -- n{j} [label=\"{:.3}\"];", graph.sim.get(i, j));
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeEntry {
    label: String,
    community: String,
    cluster: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ComponentEntry {
    members: Vec<usize>,
    kind: SubGraphKind,
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphFile {
    nodes: Vec<NodeEntry>,
    tau: f64,
    sim: Vec<Vec<f64>>,
    edges: Vec<[usize; 2]>,
    components: Vec<ComponentEntry>,
}

pub fn graph_json(graph: &SimilarityGraph, subs: &[SubGraph]) -> String {
    let file = GraphFile {
        nodes: graph
            .nodes
            .iter()
            .map(|n| NodeEntry {
                label: n.to_string(),
                community: n.community.clone(),
                cluster: n.cluster,
            })
            .collect(),
        tau: graph.tau,
        sim: graph.sim.iter_rows().map(<[f64]>::to_vec).collect(),
        edges: graph.edges.iter().map(|&(i, j)| [i, j]).collect(),
        components: subs
            .iter()
            .map(|s| ComponentEntry {
                members: s.members.clone(),
                kind: s.kind,
            })
            .collect(),
    };
    to_json_string(&file)
}

/// Parses a graph JSON document; `path` is only used in error messages.
pub fn parse_graph_json(text: &str, path: &Path) -> Result<(SimilarityGraph, Vec<SubGraph>)> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::format(path, e.to_string()))?;
    let n = file.nodes.len();
    let nodes: Vec<NodeLabel> = file
        .nodes
        .into_iter()
        .map(|e| NodeLabel {
            community: e.community,
            cluster: e.cluster,
        })
        .collect();
    let sim = DenseMatrix::from_rows(n, &file.sim)
        .filter(|m| m.rows() == n)
        .ok_or_else(|| Error::format(path, format!("similarity matrix is not {n}x{n}")))?;
    let graph = SimilarityGraph::from_similarities(nodes, sim, file.tau)?;
    let stored: Vec<(usize, usize)> = file.edges.iter().map(|e| (e[0], e[1])).collect();
    if stored != graph.edges {
        return Err(Error::format(path, "edge list does not match the similarities and threshold"));
    }
    let subs = connected_components(&graph);
    let same = subs.len() == file.components.len() && subs.iter().zip(&file.components).all(|(s, c)| s.members == c.members && s.kind == c.kind);
    if !same {
        return Err(Error::format(path, "component list does not match the edges"));
    }
    Ok((graph, subs))
}

pub fn read_graph_json(path: &Path) -> Result<(SimilarityGraph, Vec<SubGraph>)> {
    parse_graph_json(&crate::read_string(path)?, path)
}
