//! External and internal clustering quality measures.

use crate::error::{FabrikError, Result};
use crate::mask::Mask;
use crate::matrix::Matrix;

/// Relabels arbitrary labels to `0..k` in order of first appearance.
fn compact(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = std::collections::HashMap::new();
    let out = labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect();
    (out, map.len())
}

fn contingency(a: &[usize], b: &[usize]) -> (Vec<Vec<usize>>, usize, usize) {
    let (a, ka) = compact(a);
    let (b, kb) = compact(b);
    let mut table = vec![vec![0usize; kb]; ka];
    for (&i, &j) in a.iter().zip(&b) {
        table[i][j] += 1;
    }
    (table, ka, kb)
}

#[inline]
fn choose2(n: usize) -> f64 {
    (n as f64) * (n as f64 - 1.0) / 2.0
}

/// Hubert–Arabie adjusted Rand index.
///
/// Two partitions that are both a single cluster (or both all singletons) score 1.
pub fn ari(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(FabrikError::LengthMismatch(a.len(), b.len()));
    }
    if a.len() < 2 {
        return Err(FabrikError::InsufficientSample {
            needed: 2,
            got: a.len(),
        });
    }
    let (table, _, kb) = contingency(a, b);
    let index: f64 = table.iter().flatten().map(|&c| choose2(c)).sum();
    let sum_a: f64 = table.iter().map(|r| choose2(r.iter().sum())).sum();
    let sum_b: f64 = (0..kb).map(|j| choose2(table.iter().map(|r| r[j]).sum())).sum();
    let expected = sum_a * sum_b / choose2(a.len());
    let max_index = 0.5 * (sum_a + sum_b);
    let denom = max_index - expected;
    if denom == 0.0 {
        return Ok(1.0);
    }
    Ok((index - expected) / denom)
}

/// Maximum total weight of a perfect matching on a square weight matrix
/// (Hungarian algorithm on negated weights).
fn max_weight_matching(w: &[Vec<f64>]) -> f64 {
    let n = w.len();
    let cost = |i: usize, j: usize| -w[i][j];
    // potentials and matching use 1-based rows/cols with 0 as the sentinel
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n).filter(|&j| p[j] > 0).map(|j| w[p[j] - 1][j - 1]).sum()
}

/// Fraction of rows labelled correctly under the best one-to-one matching of
/// predicted clusters to true classes.
pub fn correctness(pred: &[usize], truth: &[usize]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(FabrikError::LengthMismatch(pred.len(), truth.len()));
    }
    if pred.is_empty() {
        return Err(FabrikError::EmptyInput);
    }
    let (table, kp, kt) = contingency(pred, truth);
    let size = kp.max(kt);
    let mut w = vec![vec![0.0; size]; size];
    for (i, row) in table.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            w[i][j] = c as f64;
        }
    }
    Ok(max_weight_matching(&w) / pred.len() as f64)
}

/// Sum of squared distances from each row to the mean of its cluster.
pub fn distortion(data: &Matrix, labels: &[usize]) -> Result<f64> {
    if data.nrows() != labels.len() {
        return Err(FabrikError::LengthMismatch(data.nrows(), labels.len()));
    }
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    let d = data.ncols();
    let mut sums = Matrix::zeros(k, d);
    let mut counts = vec![0usize; k];
    for (x, &l) in data.rows_iter().zip(labels) {
        counts[l] += 1;
        for (s, v) in sums.row_mut(l).iter_mut().zip(x) {
            *s += v;
        }
    }
    for (j, &c) in counts.iter().enumerate() {
        if c > 0 {
            for s in sums.row_mut(j) {
                *s /= c as f64;
            }
        }
    }
    Ok(data
        .rows_iter()
        .zip(labels)
        .map(|(x, &l)| crate::matrix::squared_euclidean(x, sums.row(l)))
        .sum())
}

/// As [`distortion`], restricted to observed cells: cluster means are taken
/// per coordinate over observed values and only observed cells contribute.
pub fn distortion_observed(data: &Matrix, mask: &Mask, labels: &[usize]) -> Result<f64> {
    if data.nrows() != labels.len() {
        return Err(FabrikError::LengthMismatch(data.nrows(), labels.len()));
    }
    if mask.nrows() != data.nrows() || mask.ncols() != data.ncols() {
        return Err(FabrikError::InvalidMask("mask shape differs from data".into()));
    }
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    let d = data.ncols();
    let mut sums = Matrix::zeros(k, d);
    let mut counts = vec![0usize; k * d];
    for (i, &l) in labels.iter().enumerate() {
        for j in 0..d {
            if mask.is_observed(i, j) {
                sums.row_mut(l)[j] += data.get(i, j);
                counts[l * d + j] += 1;
            }
        }
    }
    for l in 0..k {
        for j in 0..d {
            if counts[l * d + j] > 0 {
                sums.row_mut(l)[j] /= counts[l * d + j] as f64;
            }
        }
    }
    let mut total = 0.0;
    for (i, &l) in labels.iter().enumerate() {
        for j in 0..d {
            if mask.is_observed(i, j) {
                let r = data.get(i, j) - sums.get(l, j);
                total += r * r;
            }
        }
    }
    Ok(total)
}
