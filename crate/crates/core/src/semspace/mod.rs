//! Geometry of the topic space.
//!
//! Documents are points on the k-simplex. Communities are summarized either
//! by a single mean point or by a "semantic span": the centroids of a
//! k-means clustering of their documents. Points are compared with cosine
//! similarity; clustering uses Euclidean distance.

mod kmeans;
mod metrics;
mod span;

pub use kmeans::{kmeans, KMeansFit, MAX_LLOYD_ITERATIONS};
pub use metrics::{calinski_harabasz, inertia, silhouette, silhouette_samples};
pub use span::{
    select_cluster_count, semantic_span, CandidateMetrics, ClusterSelection, SelectionRule, SemanticSpan, SpanParams,
};

use alloc::string::String;
use core::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{dot, DenseMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("vectors have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("cosine similarity is undefined for a zero vector")]
    ZeroVector,
    #[error("no points given")]
    EmptyInput,
    #[error("cannot form {c} clusters from {n} points")]
    InvalidClusterCount { c: usize, n: usize },
    #[error("at least two clusters are required")]
    SingleCluster,
    #[error("cluster {0} is empty")]
    EmptyCluster(usize),
    #[error("every point is its own cluster")]
    TooManyClusters,
    #[error("assignments cover {found} points, expected {expected}")]
    AssignmentLength { expected: usize, found: usize },
    #[error("invalid candidate range [{c_min}, {c_max}] for {n} points")]
    InvalidRange { c_min: usize, c_max: usize, n: usize },
}

/// `a . b / (|a| |b|)`, clamped to `[-1, 1]`.
pub fn cosine_sim(a: &[f64], b: &[f64]) -> Result<f64, GeometryError> {
    if a.len() != b.len() {
        return Err(GeometryError::LengthMismatch(a.len(), b.len()));
    }
    let na = libm::sqrt(dot(a, a));
    let nb = libm::sqrt(dot(b, b));
    if na == 0.0 || nb == 0.0 {
        return Err(GeometryError::ZeroVector);
    }
    Ok((dot(a, b) / (na * nb)).clamp(-1.0, 1.0))
}

/// Node identity: a community, optionally narrowed to one of its clusters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeLabel {
    pub community: String,
    pub cluster: Option<usize>,
}

impl NodeLabel {
    pub fn community(community: impl Into<String>) -> Self {
        Self {
            community: community.into(),
            cluster: None,
        }
    }

    pub fn cluster(community: impl Into<String>, cluster: usize) -> Self {
        Self {
            community: community.into(),
            cluster: Some(cluster),
        }
    }
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cluster {
            Some(c) => write!(f, "{}#{}", self.community, c),
            None => f.write_str(&self.community),
        }
    }
}

/// A labeled point in topic space with the number of documents behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Centroid {
    pub vector: alloc::vec::Vec<f64>,
    pub label: NodeLabel,
    pub support: usize,
}

/// Coordinate-wise mean of a community's document vectors.
pub fn community_centroid(points: &DenseMatrix, label: NodeLabel) -> Result<Centroid, GeometryError> {
    if points.rows() == 0 {
        return Err(GeometryError::EmptyInput);
    }
    Ok(Centroid {
        vector: mean_of(points.iter_rows(), points.cols()),
        label,
        support: points.rows(),
    })
}

pub(crate) fn mean_of<'a>(rows: impl Iterator<Item = &'a [f64]>, cols: usize) -> alloc::vec::Vec<f64> {
    let mut sum = alloc::vec![0.0; cols];
    let mut n = 0usize;
    for row in rows {
        for (s, x) in sum.iter_mut().zip(row) {
            *s += x;
        }
        n += 1;
    }
    for s in &mut sum {
        *s /= n as f64;
    }
    sum
}
