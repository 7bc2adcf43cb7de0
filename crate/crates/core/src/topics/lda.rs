//! Latent Dirichlet Allocation by collapsed Gibbs sampling.
//!
//! Tokens are visited in a fixed order (documents in row order, terms in
//! column order, repeated by count) and every draw comes from a seeded
//! ChaCha stream, so a `(matrix, config)` pair determines the model bit for
//! bit.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::TopicError;
use crate::matrix::DenseMatrix;
use crate::rng;
use crate::text::{DocTermMatrix, RowLabel};

/// Averages point estimates over post-burn-in sweeps instead of reading
/// them off the final sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleAveraging {
    pub burn_in: usize,
    /// Keep every `thin`-th sweep after burn-in.
    pub thin: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
    pub averaging: Option<SampleAveraging>,
}

impl LdaConfig {
    /// `alpha = 50 / k`, `beta = 0.01`, 1000 sweeps, seed 0.
    pub fn new(k: usize) -> Self {
        Self {
            k,
            alpha: 50.0 / k.max(1) as f64,
            beta: 0.01,
            iterations: 1000,
            seed: 0,
            averaging: None,
        }
    }

    fn validate(&self) -> Result<(), TopicError> {
        if self.k == 0 {
            return Err(TopicError::InvalidTopicCount);
        }
        let ok = |x: f64| x > 0.0 && x.is_finite();
        if !ok(self.alpha) || !ok(self.beta) {
            return Err(TopicError::InvalidPrior {
                alpha: self.alpha,
                beta: self.beta,
            });
        }
        if self.averaging.is_some_and(|a| a.thin == 0) {
            return Err(TopicError::InvalidAveraging);
        }
        Ok(())
    }
}

/// A fitted topic-term distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    pub k: usize,
    pub vocab_size: usize,
    /// `k x vocab_size`; each row is a distribution over terms.
    pub phi: DenseMatrix,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl LdaModel {
    /// Checks shapes and that every phi row lies on the simplex.
    pub fn validate(&self) -> Result<(), TopicError> {
        if self.k == 0 || self.vocab_size == 0 {
            return Err(TopicError::InvalidModel("empty model".into()));
        }
        if self.phi.rows() != self.k || self.phi.cols() != self.vocab_size {
            return Err(TopicError::InvalidModel(alloc::format!(
                "phi is {}x{}, expected {}x{}",
                self.phi.rows(),
                self.phi.cols(),
                self.k,
                self.vocab_size
            )));
        }
        for (z, row) in self.phi.iter_rows().enumerate() {
            let sum: f64 = row.iter().sum();
            if row.iter().any(|&p| !(p >= 0.0)) || (sum - 1.0).abs() > 1e-9 {
                return Err(TopicError::InvalidModel(alloc::format!("phi row {z} is not a distribution")));
            }
        }
        Ok(())
    }

    /// Highest-probability term indices of topic `z`, ties by index.
    pub fn top_term_indices(&self, z: usize, n: usize) -> Vec<usize> {
        let row = self.phi.row(z);
        let mut idx: Vec<usize> = (0..row.len()).collect();
        idx.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
        idx.truncate(n);
        idx
    }

    /// Reorders topics so that new topic `i` is old topic `order[i]`.
    pub fn permute_topics(&self, order: &[usize]) -> Self {
        let mut out = self.clone();
        out.phi = self.phi.select_rows(order);
        out
    }
}

/// Per-document topic proportions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocTopicMatrix {
    /// `n_docs x k`; each row is a point on the simplex.
    pub theta: DenseMatrix,
    pub rows: Vec<RowLabel>,
}

impl DocTopicMatrix {
    pub fn k(&self) -> usize {
        self.theta.cols()
    }

    /// Row positions belonging to a community, in row order.
    pub fn rows_of(&self, community: &str) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.community == community)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn permute_topics(&self, order: &[usize]) -> Self {
        let mut theta = DenseMatrix::zeros(self.theta.rows(), order.len());
        for d in 0..self.theta.rows() {
            for (new, &old) in order.iter().enumerate() {
                theta.set(d, new, self.theta.get(d, old));
            }
        }
        Self {
            theta,
            rows: self.rows.clone(),
        }
    }
}

/// Flattened token stream of a count matrix.
struct Tokens {
    words: Vec<u32>,
    doc_start: Vec<usize>,
}

impl Tokens {
    fn from_counts(counts: &DocTermMatrix) -> Self {
        let mut words = Vec::with_capacity(counts.total_tokens() as usize);
        let mut doc_start = Vec::with_capacity(counts.n_docs() + 1);
        doc_start.push(0);
        for d in 0..counts.n_docs() {
            for (w, c) in counts.counts.row_iter(d) {
                words.extend(core::iter::repeat_n(w as u32, c as usize));
            }
            doc_start.push(words.len());
        }
        Self { words, doc_start }
    }

    fn doc(&self, d: usize) -> core::ops::Range<usize> {
        self.doc_start[d]..self.doc_start[d + 1]
    }
}

fn read_phi(n_wz: &[u32], n_z: &[u32], k: usize, v: usize, beta: f64) -> DenseMatrix {
    let mut phi = DenseMatrix::zeros(k, v);
    for z in 0..k {
        let denom = f64::from(n_z[z]) + v as f64 * beta;
        for w in 0..v {
            phi.set(z, w, (f64::from(n_wz[w * k + z]) + beta) / denom);
        }
    }
    phi
}

/// Fits LDA with collapsed Gibbs sampling.
///
/// `phi[z][w] = (n_zw + beta) / (n_z + V beta)` from the final sample, or the
/// average of that estimate over the kept sweeps when averaging is on.
pub fn fit_lda(counts: &DocTermMatrix, config: &LdaConfig) -> Result<LdaModel, TopicError> {
    config.validate()?;
    let (k, v) = (config.k, counts.n_terms());
    if v == 0 {
        return Err(TopicError::EmptyVocabulary { vocab_size: v });
    }
    let tokens = Tokens::from_counts(counts);
    if tokens.words.is_empty() {
        return Err(TopicError::NoTokens);
    }
    if k > tokens.words.len() {
        log::warn!("{k} topics exceed the {} available tokens", tokens.words.len());
    }
    let (alpha, beta) = (config.alpha, config.beta);
    let v_beta = v as f64 * beta;

    let mut rng = rng::stream(config.seed, 0);
    let mut z_of: Vec<u32> = Vec::with_capacity(tokens.words.len());
    let mut n_wz = vec![0u32; v * k];
    let mut n_dz = vec![0u32; counts.n_docs() * k];
    let mut n_z = vec![0u32; k];
    for d in 0..counts.n_docs() {
        for i in tokens.doc(d) {
            let z = rng.random_range(0..k);
            let w = tokens.words[i] as usize;
            z_of.push(z as u32);
            n_wz[w * k + z] += 1;
            n_dz[d * k + z] += 1;
            n_z[z] += 1;
        }
    }

    let mut weights = vec![0.0; k];
    let mut phi_sum: Option<(DenseMatrix, usize)> = config.averaging.map(|_| (DenseMatrix::zeros(k, v), 0));
    for sweep in 1..=config.iterations {
        for d in 0..counts.n_docs() {
            let ndz = &mut n_dz[d * k..(d + 1) * k];
            for i in tokens.doc(d) {
                let w = tokens.words[i] as usize;
                let old = z_of[i] as usize;
                let nwz = &mut n_wz[w * k..(w + 1) * k];
                nwz[old] -= 1;
                ndz[old] -= 1;
                n_z[old] -= 1;
                let mut total = 0.0;
                for z in 0..k {
                    let p = (f64::from(ndz[z]) + alpha) * (f64::from(nwz[z]) + beta) / (f64::from(n_z[z]) + v_beta);
                    weights[z] = p;
                    total += p;
                }
                let new = rng::sample_weighted(&mut rng, &weights, total);
                nwz[new] += 1;
                ndz[new] += 1;
                n_z[new] += 1;
                z_of[i] = new as u32;
            }
        }
        if let (Some(avg), Some((acc, kept))) = (config.averaging, phi_sum.as_mut()) {
            if sweep > avg.burn_in && (sweep - avg.burn_in) % avg.thin == 0 {
                let phi = read_phi(&n_wz, &n_z, k, v, beta);
                for z in 0..k {
                    for (a, p) in acc.row_mut(z).iter_mut().zip(phi.row(z)) {
                        *a += p;
                    }
                }
                *kept += 1;
            }
        }
    }

    let phi = match phi_sum {
        Some((mut acc, kept)) if kept > 0 => {
            // Renormalize the summed estimates; equivalent to dividing by `kept`.
            for z in 0..k {
                let row = acc.row_mut(z);
                let sum: f64 = row.iter().sum();
                for p in row.iter_mut() {
                    *p /= sum;
                }
            }
            acc
        }
        Some(_) => {
            log::warn!("no sweep passed burn-in; using the final sample");
            read_phi(&n_wz, &n_z, k, v, beta)
        }
        None => read_phi(&n_wz, &n_z, k, v, beta),
    };
    Ok(LdaModel {
        k,
        vocab_size: v,
        phi,
        alpha,
        beta,
        iterations: config.iterations,
        seed: config.seed,
    })
}

/// Estimates each document's topic proportions with `phi` held fixed.
///
/// Each document runs its own Gibbs chain on stream `d` of `seed`, so rows are
/// independent of one another and of processing order.
/// `theta[d][z] = (n_dz + alpha) / (len_d + k alpha)` from the final sample.
pub fn infer_theta(model: &LdaModel, counts: &DocTermMatrix, iterations: usize, seed: u64) -> Result<DocTopicMatrix, TopicError> {
    if counts.n_terms() != model.vocab_size {
        return Err(TopicError::DimensionMismatch {
            expected: model.vocab_size,
            found: counts.n_terms(),
        });
    }
    let k = model.k;
    let alpha = model.alpha;
    // Term-major copy of phi for the inner loop.
    let mut phi_t = vec![0.0; model.vocab_size * k];
    for z in 0..k {
        for (w, &p) in model.phi.row(z).iter().enumerate() {
            phi_t[w * k + z] = p;
        }
    }
    let tokens = Tokens::from_counts(counts);
    let mut theta = DenseMatrix::zeros(counts.n_docs(), k);
    let mut weights = vec![0.0; k];
    let mut ndz = vec![0u32; k];
    for d in 0..counts.n_docs() {
        let words = &tokens.words[tokens.doc(d)];
        let mut rng = rng::stream(seed, d as u64);
        ndz.iter_mut().for_each(|c| *c = 0);
        let mut z_of: Vec<usize> = words
            .iter()
            .map(|_| {
                let z = rng.random_range(0..k);
                ndz[z] += 1;
                z
            })
            .collect();
        for _ in 0..iterations {
            for (i, &w) in words.iter().enumerate() {
                let old = z_of[i];
                ndz[old] -= 1;
                let pw = &phi_t[w as usize * k..(w as usize + 1) * k];
                let mut total = 0.0;
                for z in 0..k {
                    let p = (f64::from(ndz[z]) + alpha) * pw[z];
                    weights[z] = p;
                    total += p;
                }
                let new = if total > 0.0 {
                    rng::sample_weighted(&mut rng, &weights, total)
                } else {
                    old
                };
                ndz[new] += 1;
                z_of[i] = new;
            }
        }
        let denom = words.len() as f64 + k as f64 * alpha;
        for z in 0..k {
            theta.set(d, z, (f64::from(ndz[z]) + alpha) / denom);
        }
    }
    Ok(DocTopicMatrix {
        theta,
        rows: counts.rows.clone(),
    })
}

/// `exp(-sum_d sum_w n_dw ln(sum_z theta[d][z] phi[z][w]) / T)`.
pub fn perplexity(model: &LdaModel, theta: &DocTopicMatrix, counts: &DocTermMatrix) -> Result<f64, TopicError> {
    if counts.n_terms() != model.vocab_size {
        return Err(TopicError::DimensionMismatch {
            expected: model.vocab_size,
            found: counts.n_terms(),
        });
    }
    if theta.k() != model.k {
        return Err(TopicError::DimensionMismatch {
            expected: model.k,
            found: theta.k(),
        });
    }
    if theta.theta.rows() != counts.n_docs() {
        return Err(TopicError::DimensionMismatch {
            expected: counts.n_docs(),
            found: theta.theta.rows(),
        });
    }
    let total = counts.total_tokens();
    if total == 0 {
        return Err(TopicError::NoTokens);
    }
    let mut log_lik = 0.0;
    for d in 0..counts.n_docs() {
        let th = theta.theta.row(d);
        for (w, c) in counts.counts.row_iter(d) {
            let p: f64 = (0..model.k).map(|z| th[z] * model.phi.get(z, w)).sum();
            if !(p > 0.0) {
                return Err(TopicError::ZeroProbability { doc: d, term: w });
            }
            log_lik += f64::from(c) * libm::log(p);
        }
    }
    Ok(libm::exp(-log_lik / total as f64))
}
