//! Internal cluster-validity scores.

use alloc::vec;
use alloc::vec::Vec;

use super::GeometryError;
use crate::matrix::{squared_distance, DenseMatrix};

/// Sum of squared distances from each point to its assigned centroid.
pub fn inertia(points: &DenseMatrix, centroids: &DenseMatrix, assignments: &[usize]) -> f64 {
    points
        .iter_rows()
        .zip(assignments)
        .map(|(p, &a)| squared_distance(p, centroids.row(a)))
        .sum()
}

/// Cluster sizes for assignments labeled `0..C`; errors on gaps or a single
/// cluster.
fn cluster_sizes(points: &DenseMatrix, assignments: &[usize]) -> Result<Vec<usize>, GeometryError> {
    if assignments.len() != points.rows() {
        return Err(GeometryError::AssignmentLength {
            expected: points.rows(),
            found: assignments.len(),
        });
    }
    let c = assignments.iter().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; c];
    for &a in assignments {
        sizes[a] += 1;
    }
    if let Some(empty) = sizes.iter().position(|&s| s == 0) {
        return Err(GeometryError::EmptyCluster(empty));
    }
    if c < 2 {
        return Err(GeometryError::SingleCluster);
    }
    Ok(sizes)
}

/// `(BGSS / (C - 1)) / (WGSS / (N - C))`.
///
/// Zero within-cluster dispersion gives `+inf` when the clusters are apart
/// and `0` when every point coincides.
pub fn calinski_harabasz(points: &DenseMatrix, assignments: &[usize]) -> Result<f64, GeometryError> {
    let sizes = cluster_sizes(points, assignments)?;
    let (n, c) = (points.rows(), sizes.len());
    if c >= n {
        return Err(GeometryError::TooManyClusters);
    }
    let dim = points.cols();
    let global = super::mean_of(points.iter_rows(), dim);
    let mut means = DenseMatrix::zeros(c, dim);
    for (p, &a) in points.iter_rows().zip(assignments) {
        for (m, x) in means.row_mut(a).iter_mut().zip(p) {
            *m += x;
        }
    }
    for (j, &s) in sizes.iter().enumerate() {
        for m in means.row_mut(j) {
            *m /= s as f64;
        }
    }
    let bgss: f64 = (0..c).map(|j| sizes[j] as f64 * squared_distance(means.row(j), &global)).sum();
    let wgss = inertia(points, &means, assignments);
    if wgss == 0.0 {
        return Ok(if bgss > 0.0 { f64::INFINITY } else { 0.0 });
    }
    Ok((bgss / (c - 1) as f64) / (wgss / (n - c) as f64))
}

/// Per-point silhouette `(b - a) / max(a, b)` with Euclidean distances.
/// Points alone in their cluster score 0, as do points with `a = b = 0`.
pub fn silhouette_samples(points: &DenseMatrix, assignments: &[usize]) -> Result<Vec<f64>, GeometryError> {
    let sizes = cluster_sizes(points, assignments)?;
    let n = points.rows();
    let c = sizes.len();
    let mut sums = vec![0.0; c];
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        sums.iter_mut().for_each(|s| *s = 0.0);
        let pi = points.row(i);
        for (j, &aj) in assignments.iter().enumerate() {
            if j != i {
                sums[aj] += libm::sqrt(squared_distance(pi, points.row(j)));
            }
        }
        let own = assignments[i];
        if sizes[own] == 1 {
            out.push(0.0);
            continue;
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = (0..c)
            .filter(|&j| j != own)
            .map(|j| sums[j] / sizes[j] as f64)
            .fold(f64::INFINITY, f64::min);
        let m = a.max(b);
        out.push(if m > 0.0 { (b - a) / m } else { 0.0 });
    }
    Ok(out)
}

/// Mean silhouette over all points.
pub fn silhouette(points: &DenseMatrix, assignments: &[usize]) -> Result<f64, GeometryError> {
    let s = silhouette_samples(points, assignments)?;
    Ok(s.iter().sum::<f64>() / s.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_points() -> DenseMatrix {
        DenseMatrix::from_rows(2, [[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]]).unwrap()
    }

    #[test]
    fn two_pair_instance() {
        let p = four_points();
        let a = [0, 0, 1, 1];
        assert_eq!(calinski_harabasz(&p, &a).unwrap(), 200.0);
        let expected = {
            let b = (10.0 + libm::sqrt(101.0)) / 2.0;
            (b - 1.0) / b
        };
        let s = silhouette(&p, &a).unwrap();
        assert!((s - expected).abs() < 1e-12);
        assert!((s - 0.900).abs() < 1e-3);
        let c = DenseMatrix::from_rows(2, [[0.0, 0.5], [10.0, 0.5]]).unwrap();
        assert_eq!(inertia(&p, &c, &a), 1.0);
    }

    #[test]
    fn identical_means_give_zero_calinski() {
        let p = DenseMatrix::from_rows(1, [[-1.0], [1.0], [-1.0], [1.0]]).unwrap();
        assert_eq!(calinski_harabasz(&p, &[0, 0, 1, 1]).unwrap(), 0.0);
    }

    #[test]
    fn preconditions() {
        let p = four_points();
        assert_eq!(calinski_harabasz(&p, &[0, 0, 0, 0]), Err(GeometryError::SingleCluster));
        assert_eq!(calinski_harabasz(&p, &[0, 1, 2, 3]), Err(GeometryError::TooManyClusters));
        assert_eq!(calinski_harabasz(&p, &[0, 0, 2, 2]), Err(GeometryError::EmptyCluster(1)));
        assert_eq!(silhouette(&p, &[1, 1, 1, 1]), Err(GeometryError::EmptyCluster(0)));
        assert_eq!(silhouette(&p, &[0, 0, 0, 0]), Err(GeometryError::SingleCluster));
        assert!(matches!(silhouette(&p, &[0, 1]), Err(GeometryError::AssignmentLength { .. })));
    }

    #[test]
    fn tight_cluster_scores_one() {
        let p = DenseMatrix::from_rows(1, [[0.0], [0.0], [0.0], [100.0], [101.0]]).unwrap();
        let s = silhouette_samples(&p, &[0, 0, 0, 1, 1]).unwrap();
        assert_eq!(&s[..3], &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn singletons_score_zero() {
        let p = DenseMatrix::from_rows(1, [[0.0], [1.0], [5.0]]).unwrap();
        let s = silhouette_samples(&p, &[0, 0, 1]).unwrap();
        assert_eq!(s[2], 0.0);
    }
}
