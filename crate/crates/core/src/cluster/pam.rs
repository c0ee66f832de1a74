//! Partitioning Around Medoids with the classical BUILD and SWAP phases on
//! plain Euclidean distances.

use crate::error::{FabrikError, Result};
use crate::matrix::{euclidean, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub struct PamResult {
    /// Row indices of the medoids; position `j` is group `j`.
    pub medoids: Vec<usize>,
    pub labels: Vec<usize>,
    /// Total distance from each row to its nearest medoid.
    pub cost: f64,
    pub swaps: usize,
}

struct Dissimilarity {
    n: usize,
    d: Vec<f64>,
}

impl Dissimilarity {
    fn new(data: &Matrix) -> Self {
        let n = data.nrows();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = euclidean(data.row(i), data.row(j));
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        Dissimilarity { n, d }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }
}

/// Nearest and second-nearest medoid positions with their distances, per row.
fn nearest_two(dm: &Dissimilarity, medoids: &[usize]) -> Vec<(usize, f64, f64)> {
    (0..dm.n)
        .map(|o| {
            let (mut best, mut d1, mut d2) = (0, f64::INFINITY, f64::INFINITY);
            for (pos, &m) in medoids.iter().enumerate() {
                let d = dm.get(o, m);
                if d < d1 {
                    d2 = d1;
                    d1 = d;
                    best = pos;
                } else if d < d2 {
                    d2 = d;
                }
            }
            (best, d1, d2)
        })
        .collect()
}

fn improvement_threshold(cost: f64) -> f64 {
    1e-12 * (1.0 + cost.abs())
}

/// k-medoids clustering of the rows of `data`.
pub fn pam(data: &Matrix, k: usize) -> Result<PamResult> {
    let n = data.nrows();
    if k == 0 || k > n {
        return Err(FabrikError::InvalidK { k, n });
    }
    let dm = Dissimilarity::new(data);

    // BUILD: start from the row with the smallest total distance, then keep
    // adding the row that lowers the total cost the most.
    let mut medoids = Vec::with_capacity(k);
    let mut is_medoid = vec![false; n];
    let first = (0..n)
        .map(|i| (i, (0..n).map(|j| dm.get(i, j)).sum::<f64>()))
        .fold((0, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b })
        .0;
    medoids.push(first);
    is_medoid[first] = true;
    let mut near: Vec<f64> = (0..n).map(|o| dm.get(o, first)).collect();
    while medoids.len() < k {
        let mut best = (usize::MAX, f64::NEG_INFINITY);
        for c in (0..n).filter(|&c| !is_medoid[c]) {
            let gain: f64 = (0..n).map(|o| (near[o] - dm.get(o, c)).max(0.0)).sum();
            if gain > best.1 {
                best = (c, gain);
            }
        }
        let c = best.0;
        medoids.push(c);
        is_medoid[c] = true;
        for (o, v) in near.iter_mut().enumerate() {
            *v = v.min(dm.get(o, c));
        }
    }

    // SWAP: apply the best strictly improving (medoid, non-medoid) exchange until none is left.
    let mut cost: f64 = near.iter().sum();
    let mut swaps = 0;
    loop {
        let info = nearest_two(&dm, &medoids);
        let mut best = (usize::MAX, usize::MAX, cost);
        for pos in 0..k {
            for h in (0..n).filter(|&h| !is_medoid[h]) {
                let trial: f64 = info
                    .iter()
                    .enumerate()
                    .map(|(o, &(b, d1, d2))| {
                        let without = if b == pos { d2 } else { d1 };
                        without.min(dm.get(o, h))
                    })
                    .sum();
                if trial < best.2 {
                    best = (pos, h, trial);
                }
            }
        }
        if best.0 == usize::MAX || cost - best.2 <= improvement_threshold(cost) {
            break;
        }
        let (pos, h, new_cost) = best;
        is_medoid[medoids[pos]] = false;
        is_medoid[h] = true;
        medoids[pos] = h;
        cost = new_cost;
        swaps += 1;
    }

    let labels: Vec<usize> = nearest_two(&dm, &medoids).into_iter().map(|t| t.0).collect();
    let cost = (0..n).map(|o| dm.get(o, medoids[labels[o]])).sum();
    Ok(PamResult {
        medoids,
        labels,
        cost,
        swaps,
    })
}
