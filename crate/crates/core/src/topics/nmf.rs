//! Non-negative matrix factorization with Lee-Seung multiplicative updates
//! for the squared Frobenius loss.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::TopicError;
use crate::matrix::{CsrMatrix, DenseMatrix};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NmfConfig {
    pub k: usize,
    pub iterations: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NmfModel {
    /// `n_rows x k`.
    pub w: DenseMatrix,
    /// `k x n_cols`.
    pub h: DenseMatrix,
    /// `||X - WH||_F^2` at initialization and after every iteration.
    pub objective: Vec<f64>,
}

impl NmfModel {
    pub fn reconstruction(&self) -> DenseMatrix {
        let (n, k, v) = (self.w.rows(), self.w.cols(), self.h.cols());
        let mut out = DenseMatrix::zeros(n, v);
        for i in 0..n {
            let wi = self.w.row(i);
            let row = out.row_mut(i);
            for a in 0..k {
                if wi[a] == 0.0 {
                    continue;
                }
                for (o, h) in row.iter_mut().zip(self.h.row(a)) {
                    *o += wi[a] * h;
                }
            }
        }
        out
    }
}

/// `A^T A` for a row-major `rows x k` matrix (or `A A^T` for `k x cols`
/// when `transpose` is set).
fn gram(m: &DenseMatrix, transpose: bool) -> DenseMatrix {
    let k = if transpose { m.rows() } else { m.cols() };
    let mut g = DenseMatrix::zeros(k, k);
    if transpose {
        for a in 0..k {
            for b in a..k {
                let v = crate::matrix::dot(m.row(a), m.row(b));
                g.set(a, b, v);
                g.set(b, a, v);
            }
        }
    } else {
        for row in m.iter_rows() {
            for a in 0..k {
                for b in a..k {
                    let v = g.get(a, b) + row[a] * row[b];
                    g.set(a, b, v);
                }
            }
        }
        for a in 0..k {
            for b in 0..a {
                g.set(a, b, g.get(b, a));
            }
        }
    }
    g
}

/// `||X - WH||^2 = ||X||^2 - 2 <X, WH> + tr((W^T W)(H H^T))`, touching only
/// the stored entries of `X`.
fn objective(x: &CsrMatrix<f64>, x_norm2: f64, w: &DenseMatrix, h: &DenseMatrix) -> f64 {
    let k = w.cols();
    let mut cross = 0.0;
    for i in 0..x.n_rows() {
        let wi = w.row(i);
        for (j, v) in x.row_iter(i) {
            let wh: f64 = (0..k).map(|a| wi[a] * h.get(a, j)).sum();
            cross += v * wh;
        }
    }
    let wtw = gram(w, false);
    let hht = gram(h, true);
    let trace = crate::matrix::dot(wtw.as_slice(), hht.as_slice());
    (x_norm2 - 2.0 * cross + trace).max(0.0)
}

/// Factorizes a non-negative matrix as `W H` with `k` components.
///
/// Factors start uniform on `[0, sqrt(mean(X) / k))` from `seed`. A zero
/// input returns zero factors.
pub fn fit_nmf(x: &CsrMatrix<f64>, config: &NmfConfig) -> Result<NmfModel, TopicError> {
    if config.k == 0 {
        return Err(TopicError::InvalidTopicCount);
    }
    for (i, j, v) in x.triplets() {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(TopicError::NegativeInput { row: i, col: j });
        }
    }
    let (n, v, k) = (x.n_rows(), x.n_cols(), config.k);
    let x_norm2: f64 = x.triplets().map(|(_, _, e)| e * e).sum();
    if x_norm2 == 0.0 {
        log::warn!("NMF input is all zero; returning zero factors");
        return Ok(NmfModel {
            w: DenseMatrix::zeros(n, k),
            h: DenseMatrix::zeros(k, v),
            objective: vec![0.0],
        });
    }
    let mean = x.triplets().map(|(_, _, e)| e).sum::<f64>() / (n * v) as f64;
    let scale = libm::sqrt(mean / k as f64);
    let mut rng = rng::stream(config.seed, 0);
    let mut w = DenseMatrix::zeros(n, k);
    let mut h = DenseMatrix::zeros(k, v);
    for i in 0..n {
        for a in 0..k {
            w.set(i, a, rng.random::<f64>() * scale);
        }
    }
    for a in 0..k {
        for j in 0..v {
            h.set(a, j, rng.random::<f64>() * scale);
        }
    }

    let mut trace = Vec::with_capacity(config.iterations + 1);
    trace.push(objective(x, x_norm2, &w, &h));
    for _ in 0..config.iterations {
        // H <- H * (W^T X) / (W^T W H)
        let mut numer_h = DenseMatrix::zeros(k, v);
        for i in 0..n {
            let wi = w.row(i).to_vec();
            for (j, e) in x.row_iter(i) {
                for a in 0..k {
                    let cur = numer_h.get(a, j);
                    numer_h.set(a, j, cur + wi[a] * e);
                }
            }
        }
        let wtw = gram(&w, false);
        for j in 0..v {
            let col: Vec<f64> = (0..k).map(|b| h.get(b, j)).collect();
            for a in 0..k {
                let denom: f64 = (0..k).map(|b| wtw.get(a, b) * col[b]).sum();
                if denom > 0.0 {
                    h.set(a, j, col[a] * numer_h.get(a, j) / denom);
                }
            }
        }
        // W <- W * (X H^T) / (W H H^T)
        let mut numer_w = DenseMatrix::zeros(n, k);
        for i in 0..n {
            let out = numer_w.row_mut(i);
            for (j, e) in x.row_iter(i) {
                for (a, o) in out.iter_mut().enumerate() {
                    *o += e * h.get(a, j);
                }
            }
        }
        let hht = gram(&h, true);
        for i in 0..n {
            let wi = w.row(i).to_vec();
            for a in 0..k {
                let denom: f64 = (0..k).map(|b| wi[b] * hht.get(b, a)).sum();
                if denom > 0.0 {
                    w.set(i, a, wi[a] * numer_w.get(i, a) / denom);
                }
            }
        }
        trace.push(objective(x, x_norm2, &w, &h));
    }
    Ok(NmfModel { w, h, objective: trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank_one(u: &[f64], v: &[f64]) -> CsrMatrix<f64> {
        let rows: Vec<Vec<f64>> = u.iter().map(|a| v.iter().map(|b| a * b).collect()).collect();
        CsrMatrix::from_dense(&DenseMatrix::from_rows(v.len(), rows).unwrap())
    }

    fn rel_error(x: &CsrMatrix<f64>, m: &NmfModel) -> f64 {
        let dense = x.to_dense();
        let wh = m.reconstruction();
        let num: f64 = dense.as_slice().iter().zip(wh.as_slice()).map(|(a, b)| (a - b) * (a - b)).sum();
        let den: f64 = dense.as_slice().iter().map(|a| a * a).sum();
        libm::sqrt(num / den)
    }

    #[test]
    fn rank_one_recovered() {
        let x = rank_one(&[1.0, 2.0, 0.5, 3.0], &[0.3, 1.0, 2.0, 0.1, 0.7]);
        let m = fit_nmf(&x, &NmfConfig { k: 1, iterations: 200, seed: 4 }).unwrap();
        assert!(rel_error(&x, &m) < 1e-3);
        // The tracked objective agrees with the dense reconstruction.
        let dense_obj = {
            let d = x.to_dense();
            let r = m.reconstruction();
            d.as_slice().iter().zip(r.as_slice()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
        };
        assert!((m.objective.last().unwrap() - dense_obj).abs() < 1e-10);
    }

    #[test]
    fn objective_non_increasing_and_factors_non_negative() {
        let x = CsrMatrix::from_dense(
            &DenseMatrix::from_rows(4, [[1.0, 0.0, 2.0, 0.5], [0.0, 3.0, 1.0, 0.0], [2.0, 1.0, 0.0, 1.0]]).unwrap(),
        );
        let m = fit_nmf(&x, &NmfConfig { k: 2, iterations: 100, seed: 1 }).unwrap();
        assert_eq!(m.objective.len(), 101);
        for pair in m.objective.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-10, "{} -> {}", pair[0], pair[1]);
        }
        assert!(m.w.as_slice().iter().chain(m.h.as_slice()).all(|&e| e >= 0.0));
    }

    #[test]
    fn zero_input_gives_zero_factors() {
        let x = CsrMatrix::from_dense(&DenseMatrix::zeros(3, 4));
        let m = fit_nmf(&x, &NmfConfig { k: 2, iterations: 10, seed: 0 }).unwrap();
        assert!(m.w.as_slice().iter().chain(m.h.as_slice()).all(|&e| e == 0.0));
        assert_eq!((m.w.rows(), m.w.cols(), m.h.rows(), m.h.cols()), (3, 2, 2, 4));
    }

    #[test]
    fn rejects_negative_input_and_zero_rank() {
        let x = CsrMatrix::from_dense(&DenseMatrix::from_rows(2, [[1.0, -1.0]]).unwrap());
        assert_eq!(
            fit_nmf(&x, &NmfConfig { k: 1, iterations: 1, seed: 0 }),
            Err(TopicError::NegativeInput { row: 0, col: 1 })
        );
        let x = rank_one(&[1.0], &[1.0]);
        assert_eq!(fit_nmf(&x, &NmfConfig { k: 0, iterations: 1, seed: 0 }), Err(TopicError::InvalidTopicCount));
    }
}
