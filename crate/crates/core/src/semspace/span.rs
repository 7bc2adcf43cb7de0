//! Cluster-count selection and per-community semantic spans.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{calinski_harabasz, kmeans, silhouette, Centroid, GeometryError, KMeansFit, NodeLabel};
use crate::matrix::DenseMatrix;

/// Scores of one candidate cluster count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CandidateMetrics {
    pub c: usize,
    pub inertia: f64,
    pub calinski: f64,
    pub silhouette: f64,
}

/// How the cluster count was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionRule {
    /// Unique silhouette maximum.
    Silhouette,
    /// Silhouette tie resolved by the higher Calinski-Harabasz score.
    CalinskiTieBreak,
    /// Silhouette and Calinski-Harabasz tie resolved by the smaller count.
    SmallestTieBreak,
    /// No candidate reached the minimum silhouette; one cluster.
    DegenerateFallback,
    /// Fewer documents than the smallest candidate needs; one cluster.
    TooFewDocuments,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSelection {
    pub c_min: usize,
    pub c_max: usize,
    /// One entry per evaluated candidate, in increasing `c`.
    pub candidates: Vec<CandidateMetrics>,
    pub chosen: usize,
    pub rule: SelectionRule,
}

/// Silhouette values closer than this count as equal.
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpanParams {
    pub c_min: usize,
    pub c_max: usize,
    pub seed: u64,
    pub restarts: usize,
    /// A split is kept only if its silhouette exceeds this. The default 0.25
    /// is the usual "no substantial structure" cutoff; 0 keeps any split
    /// with positive silhouette.
    pub min_silhouette: f64,
}

impl Default for SpanParams {
    fn default() -> Self {
        Self {
            c_min: 2,
            c_max: 10,
            seed: 0,
            restarts: 10,
            min_silhouette: 0.25,
        }
    }
}

fn evaluate(points: &DenseMatrix, c_min: usize, c_max: usize, seed: u64, restarts: usize) -> Result<Vec<(CandidateMetrics, KMeansFit)>, GeometryError> {
    (c_min..=c_max)
        .map(|c| {
            let fit = kmeans(points, c, seed, restarts)?;
            let metrics = CandidateMetrics {
                c,
                inertia: fit.inertia,
                calinski: calinski_harabasz(points, &fit.assignments)?,
                silhouette: silhouette(points, &fit.assignments)?,
            };
            Ok((metrics, fit))
        })
        .collect()
}

/// Index of the winning candidate and the rule that decided it.
fn choose(candidates: &[CandidateMetrics]) -> (usize, SelectionRule) {
    let best_s = candidates.iter().map(|m| m.silhouette).fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = (0..candidates.len())
        .filter(|&i| best_s - candidates[i].silhouette <= TIE_TOLERANCE)
        .collect();
    if tied.len() == 1 {
        return (tied[0], SelectionRule::Silhouette);
    }
    let best_ch = tied.iter().map(|&i| candidates[i].calinski).fold(f64::NEG_INFINITY, f64::max);
    let top: Vec<usize> = tied.into_iter().filter(|&i| candidates[i].calinski == best_ch).collect();
    if top.len() == 1 {
        (top[0], SelectionRule::CalinskiTieBreak)
    } else {
        // Candidates are in increasing c, so the first is the smallest.
        (top[0], SelectionRule::SmallestTieBreak)
    }
}

/// Runs k-means for every `c` in `[c_min, c_max]` and picks the count with
/// the highest mean silhouette; ties go to the higher Calinski-Harabasz score,
/// then to the smaller count. Inertia is recorded but not used by the rule.
pub fn select_cluster_count(
    points: &DenseMatrix,
    c_min: usize,
    c_max: usize,
    seed: u64,
    restarts: usize,
) -> Result<ClusterSelection, GeometryError> {
    let n = points.rows();
    if c_min < 2 || c_min > c_max || c_max >= n {
        return Err(GeometryError::InvalidRange { c_min, c_max, n });
    }
    let evaluated = evaluate(points, c_min, c_max, seed, restarts)?;
    let candidates: Vec<CandidateMetrics> = evaluated.iter().map(|(m, _)| *m).collect();
    let (i, rule) = choose(&candidates);
    Ok(ClusterSelection {
        c_min,
        c_max,
        chosen: candidates[i].c,
        candidates,
        rule,
    })
}

/// The `c x k` centroid matrix characterizing one community.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemanticSpan {
    pub community: String,
    pub centroids: DenseMatrix,
    /// Global row index of every document in the community.
    pub documents: Vec<usize>,
    /// Cluster ordinal of each entry of `documents`.
    pub assignments: Vec<usize>,
    pub selection: ClusterSelection,
}

impl SemanticSpan {
    pub fn c(&self) -> usize {
        self.centroids.rows()
    }

    /// Global row indices of the documents in cluster `ordinal`.
    pub fn cluster_documents(&self, ordinal: usize) -> Vec<usize> {
        self.documents
            .iter()
            .zip(&self.assignments)
            .filter(|&(_, &a)| a == ordinal)
            .map(|(&d, _)| d)
            .collect()
    }

    /// Centroids labeled `(community, ordinal)` with their cluster sizes.
    pub fn labeled_centroids(&self) -> Vec<Centroid> {
        let mut support = vec![0usize; self.c()];
        for &a in &self.assignments {
            support[a] += 1;
        }
        self.centroids
            .iter_rows()
            .enumerate()
            .map(|(j, row)| Centroid {
                vector: row.to_vec(),
                label: NodeLabel::cluster(self.community.clone(), j),
                support: support[j],
            })
            .collect()
    }
}

fn single_cluster(community: &str, points: &DenseMatrix, documents: Vec<usize>, selection: ClusterSelection) -> SemanticSpan {
    let mean = super::mean_of(points.iter_rows(), points.cols());
    SemanticSpan {
        community: community.into(),
        centroids: DenseMatrix::from_row_major(1, points.cols(), mean).expect("one row"),
        assignments: vec![0; documents.len()],
        documents,
        selection,
    }
}

/// Clusters one community's document vectors into its semantic span.
///
/// `points` holds the community's rows and `documents` their global row
/// indices. The candidate range is capped at `n - 1`; when that leaves no
/// candidate, or the best silhouette is at most `min_silhouette`, the span
/// collapses to the single mean point.
pub fn semantic_span(
    community: &str,
    points: &DenseMatrix,
    documents: Vec<usize>,
    params: &SpanParams,
) -> Result<SemanticSpan, GeometryError> {
    let n = points.rows();
    if n == 0 {
        return Err(GeometryError::EmptyInput);
    }
    if documents.len() != n {
        return Err(GeometryError::AssignmentLength {
            expected: n,
            found: documents.len(),
        });
    }
    let c_min = params.c_min.max(2);
    if c_min > params.c_max {
        return Err(GeometryError::InvalidRange {
            c_min: params.c_min,
            c_max: params.c_max,
            n,
        });
    }
    let c_max = params.c_max.min(n.saturating_sub(1));
    if c_max < c_min {
        log::warn!("community {community:?} has {n} documents, too few for {c_min} clusters; using a single centroid");
        let selection = ClusterSelection {
            c_min,
            c_max: params.c_max,
            candidates: Vec::new(),
            chosen: 1,
            rule: SelectionRule::TooFewDocuments,
        };
        return Ok(single_cluster(community, points, documents, selection));
    }
    let evaluated = evaluate(points, c_min, c_max, params.seed, params.restarts)?;
    let candidates: Vec<CandidateMetrics> = evaluated.iter().map(|(m, _)| *m).collect();
    let (i, rule) = choose(&candidates);
    if !(candidates[i].silhouette > params.min_silhouette) {
        log::warn!("community {community:?} shows no cluster structure; using a single centroid");
        let selection = ClusterSelection {
            c_min,
            c_max,
            candidates,
            chosen: 1,
            rule: SelectionRule::DegenerateFallback,
        };
        return Ok(single_cluster(community, points, documents, selection));
    }
    let fit = evaluated.into_iter().nth(i).expect("index from candidates").1;
    Ok(SemanticSpan {
        community: community.into(),
        centroids: fit.centroids,
        documents,
        assignments: fit.assignments,
        selection: ClusterSelection {
            c_min,
            c_max,
            chosen: candidates[i].c,
            candidates,
            rule,
        },
    })
}
