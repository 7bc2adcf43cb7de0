//! Direct, unoptimized evaluations used to cross-check the library.
//!
//! Everything here works on plain nested `Vec`s and recomputes each quantity
//! from its textbook definition, sharing no code with the crate under test.

#![allow(dead_code)]

use std::collections::BTreeSet;

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for i in 0..a.len() {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    dot / (na.sqrt() * nb.sqrt())
}

/// Dense TFIDF with smoothed idf and L2-normalized rows.
pub fn tfidf(counts: &[Vec<u32>]) -> Vec<Vec<f64>> {
    let n = counts.len();
    let v = counts.first().map_or(0, Vec::len);
    let idf: Vec<f64> = (0..v)
        .map(|t| {
            let df = counts.iter().filter(|row| row[t] > 0).count();
            ((1.0 + n as f64) / (1.0 + df as f64)).ln() + 1.0
        })
        .collect();
    counts
        .iter()
        .map(|row| {
            let raw: Vec<f64> = (0..v).map(|t| row[t] as f64 * idf[t]).collect();
            let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                raw
            } else {
                raw.iter().map(|x| x / norm).collect()
            }
        })
        .collect()
}

/// Every term with a positive summed weight, best first, ties by term.
pub fn ranked_terms(weights: &[Vec<f64>], terms: &[String], subset: &[usize]) -> Vec<(String, f64)> {
    let mut scored: Vec<(String, f64)> = terms
        .iter()
        .enumerate()
        .map(|(t, name)| (name.clone(), subset.iter().map(|&d| weights[d][t]).sum::<f64>()))
        .filter(|(_, s)| *s > 0.0)
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    scored
}

fn groups(labels: &[usize]) -> Vec<Vec<usize>> {
    let c = labels.iter().max().map_or(0, |m| m + 1);
    (0..c).map(|j| (0..labels.len()).filter(|&i| labels[i] == j).collect()).collect()
}

fn mean(points: &[Vec<f64>], members: &[usize]) -> Vec<f64> {
    let dim = points[0].len();
    (0..dim)
        .map(|j| members.iter().map(|&i| points[i][j]).sum::<f64>() / members.len() as f64)
        .collect()
}

fn sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn calinski(points: &[Vec<f64>], labels: &[usize]) -> f64 {
    let gs = groups(labels);
    let all: Vec<usize> = (0..points.len()).collect();
    let mu = mean(points, &all);
    let mut bgss = 0.0;
    let mut wgss = 0.0;
    for g in &gs {
        let m = mean(points, g);
        bgss += g.len() as f64 * sq(&m, &mu);
        for &i in g {
            wgss += sq(&points[i], &m);
        }
    }
    let (n, c) = (points.len() as f64, gs.len() as f64);
    (bgss / (c - 1.0)) / (wgss / (n - c))
}

pub fn silhouette(points: &[Vec<f64>], labels: &[usize]) -> f64 {
    let gs = groups(labels);
    let dist = |i: usize, j: usize| sq(&points[i], &points[j]).sqrt();
    let mut total = 0.0;
    for i in 0..points.len() {
        let own = &gs[labels[i]];
        if own.len() == 1 {
            continue;
        }
        let a = own.iter().filter(|&&j| j != i).map(|&j| dist(i, j)).sum::<f64>() / (own.len() - 1) as f64;
        let b = gs
            .iter()
            .enumerate()
            .filter(|(g, _)| *g != labels[i])
            .map(|(_, g)| g.iter().map(|&j| dist(i, j)).sum::<f64>() / g.len() as f64)
            .fold(f64::INFINITY, f64::min);
        let m = a.max(b);
        if m > 0.0 {
            total += (b - a) / m;
        }
    }
    total / points.len() as f64
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Repeatedly pairs the closest remaining (planted, learned) rows by total
/// variation. Returns `(planted, learned, distance)` per planted row.
pub fn greedy_match(planted: &[Vec<f64>], learned: &[Vec<f64>]) -> Vec<(usize, usize, f64)> {
    let mut pairs = Vec::new();
    for (i, p) in planted.iter().enumerate() {
        for (j, l) in learned.iter().enumerate() {
            pairs.push((total_variation(p, l), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut used_p = BTreeSet::new();
    let mut used_l = BTreeSet::new();
    let mut out = Vec::new();
    for (d, i, j) in pairs {
        if !used_p.contains(&i) && !used_l.contains(&j) {
            used_p.insert(i);
            used_l.insert(j);
            out.push((i, j, d));
        }
    }
    out.sort_by_key(|m| m.0);
    out
}

/// Connected components by transitive closure of the adjacency matrix.
pub fn components(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut reach: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j || adj[i][j]).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for i in 0..n {
        if seen.contains(&i) {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&j| reach[i][j]).collect();
        seen.extend(comp.iter().copied());
        out.push(comp);
    }
    out
}

pub fn is_clique(adj: &[Vec<bool>], members: &[usize]) -> bool {
    members.len() >= 2 && members.iter().all(|&i| members.iter().all(|&j| i == j || adj[i][j]))
}
