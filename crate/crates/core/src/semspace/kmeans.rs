use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::metrics::inertia;
use super::GeometryError;
use crate::matrix::{squared_distance, DenseMatrix};
use crate::rng;

pub const MAX_LLOYD_ITERATIONS: usize = 300;

/// Result of the best k-means restart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansFit {
    /// `c x dim`.
    pub centroids: DenseMatrix,
    pub assignments: Vec<usize>,
    pub inertia: f64,
    /// Inertia after every centroid update of the winning restart.
    pub trace: Vec<f64>,
    pub restart: usize,
}

/// Lloyd's algorithm with k-means++ seeding, keeping the restart with the
/// lowest final inertia (earliest restart on ties).
///
/// Restart `r` draws from stream `r` of `seed`. A cluster that empties is
/// re-seeded with the point farthest from its current centroid, so every
/// returned cluster is non-empty.
pub fn kmeans(points: &DenseMatrix, c: usize, seed: u64, restarts: usize) -> Result<KMeansFit, GeometryError> {
    let n = points.rows();
    if c < 1 || c > n {
        return Err(GeometryError::InvalidClusterCount { c, n });
    }
    let mut best: Option<KMeansFit> = None;
    for r in 0..restarts.max(1) {
        let mut rng = rng::stream(seed, r as u64);
        let fit = lloyd(points, c, &mut rng, r);
        if best.as_ref().is_none_or(|b| fit.inertia < b.inertia) {
            best = Some(fit);
        }
    }
    Ok(best.expect("at least one restart"))
}

fn plus_plus(points: &DenseMatrix, c: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
    let n = points.rows();
    let mut centers = DenseMatrix::zeros(c, points.cols());
    let first = rng.random_range(0..n);
    centers.row_mut(0).copy_from_slice(points.row(first));
    let mut d2: Vec<f64> = points.iter_rows().map(|p| squared_distance(p, points.row(first))).collect();
    for j in 1..c {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            rng::sample_weighted(rng, &d2, total)
        } else {
            rng.random_range(0..n)
        };
        centers.row_mut(j).copy_from_slice(points.row(pick));
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(squared_distance(points.row(i), centers.row(j)));
        }
    }
    centers
}

fn nearest(point: &[f64], centers: &DenseMatrix) -> usize {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centers.iter_rows().enumerate() {
        let d = squared_distance(point, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best.0
}

/// Moves the farthest point into each empty cluster and centers the cluster
/// on it. Returns whether anything moved.
fn repair_empty(points: &DenseMatrix, centers: &mut DenseMatrix, assign: &mut [usize]) -> bool {
    let c = centers.rows();
    let mut sizes = vec![0usize; c];
    for &a in assign.iter() {
        sizes[a] += 1;
    }
    let mut moved = false;
    for empty in 0..c {
        if sizes[empty] > 0 {
            continue;
        }
        let far = (0..points.rows())
            .filter(|&i| sizes[assign[i]] > 1)
            .map(|i| (i, squared_distance(points.row(i), centers.row(assign[i]))))
            .fold(None::<(usize, f64)>, |acc, (i, d)| match acc {
                Some((_, bd)) if bd >= d => acc,
                _ => Some((i, d)),
            });
        let Some((i, _)) = far else { break };
        sizes[assign[i]] -= 1;
        sizes[empty] = 1;
        assign[i] = empty;
        centers.row_mut(empty).copy_from_slice(points.row(i));
        moved = true;
    }
    moved
}

fn update_means(points: &DenseMatrix, centers: &mut DenseMatrix, assign: &[usize]) {
    let c = centers.rows();
    let mut sums = DenseMatrix::zeros(c, points.cols());
    let mut sizes = vec![0usize; c];
    for (p, &a) in points.iter_rows().zip(assign) {
        sizes[a] += 1;
        for (s, x) in sums.row_mut(a).iter_mut().zip(p) {
            *s += x;
        }
    }
    for j in 0..c {
        if sizes[j] == 0 {
            continue;
        }
        for (dst, s) in centers.row_mut(j).iter_mut().zip(sums.row(j)) {
            *dst = s / sizes[j] as f64;
        }
    }
}

fn lloyd(points: &DenseMatrix, c: usize, rng: &mut ChaCha8Rng, restart: usize) -> KMeansFit {
    let mut centers = plus_plus(points, c, rng);
    let mut assign = vec![usize::MAX; points.rows()];
    let mut trace = Vec::new();
    let mut converged = false;
    for _ in 0..MAX_LLOYD_ITERATIONS {
        let mut changed = false;
        for (i, p) in points.iter_rows().enumerate() {
            let j = nearest(p, &centers);
            if assign[i] != j {
                assign[i] = j;
                changed = true;
            }
        }
        changed |= repair_empty(points, &mut centers, &mut assign);
        if !changed {
            converged = true;
            break;
        }
        update_means(points, &mut centers, &assign);
        trace.push(inertia(points, &centers, &assign));
    }
    if !converged {
        log::debug!("k-means stopped after {MAX_LLOYD_ITERATIONS} iterations without converging");
    }
    let inertia = inertia(points, &centers, &assign);
    KMeansFit {
        centroids: centers,
        assignments: assign,
        inertia,
        trace,
        restart,
    }
}
