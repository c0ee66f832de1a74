use super::{Partition, SeedSet};
use crate::error::{FabrikError, Result};
use crate::matrix::{squared_euclidean, Matrix};

pub const DEFAULT_MAX_ITER: usize = 100;

/// Index of the closest center and the squared distance to it; ties go to the lowest index.
#[inline]
pub fn nearest_center(x: &[f64], centers: &Matrix) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centers.rows_iter().enumerate() {
        let d = squared_euclidean(x, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

fn assign(data: &Matrix, centers: &Matrix, labels: &mut [usize], dist: &mut [f64]) {
    for (i, x) in data.rows_iter().enumerate() {
        let (j, d) = nearest_center(x, centers);
        labels[i] = j;
        dist[i] = d;
    }
}

/// Gives every empty cluster a singleton: the row currently farthest from its
/// own center (taken from a cluster with at least two members) moves into the
/// empty cluster and becomes its center.
fn repair_empty(data: &Matrix, centers: &mut Matrix, labels: &mut [usize], dist: &mut [f64]) {
    let k = centers.nrows();
    let mut sizes = vec![0usize; k];
    for &l in labels.iter() {
        sizes[l] += 1;
    }
    for j in 0..k {
        if sizes[j] > 0 {
            continue;
        }
        let mut donor: Option<usize> = None;
        for i in 0..labels.len() {
            if sizes[labels[i]] > 1 && donor.is_none_or(|b| dist[i] > dist[b]) {
                donor = Some(i);
            }
        }
        let i = donor.expect("k <= n leaves a cluster with two members");
        sizes[labels[i]] -= 1;
        sizes[j] = 1;
        labels[i] = j;
        dist[i] = 0.0;
        centers.row_mut(j).copy_from_slice(data.row(i));
    }
}

fn update_means(data: &Matrix, labels: &[usize], centers: &mut Matrix) {
    let k = centers.nrows();
    let mut counts = vec![0usize; k];
    for j in 0..k {
        centers.row_mut(j).fill(0.0);
    }
    for (x, &l) in data.rows_iter().zip(labels) {
        counts[l] += 1;
        for (c, v) in centers.row_mut(l).iter_mut().zip(x) {
            *c += v;
        }
    }
    for (j, &n) in counts.iter().enumerate() {
        if n > 0 {
            let inv = n as f64;
            for c in centers.row_mut(j) {
                *c /= inv;
            }
        }
    }
}

fn total_cost(data: &Matrix, labels: &[usize], centers: &Matrix) -> f64 {
    data.rows_iter()
        .zip(labels)
        .map(|(x, &l)| squared_euclidean(x, centers.row(l)))
        .sum()
}

/// Lloyd's algorithm from the given seeds.
///
/// Stops when an assignment step leaves every label unchanged or after
/// `max_iter` rounds. Empty clusters are repaired after every assignment so the
/// returned partition always has `k` non-empty clusters.
pub fn lloyd(data: &Matrix, seeds: &SeedSet, max_iter: usize) -> Result<Partition> {
    lloyd_impl(data, seeds, max_iter, None)
}

/// As [`lloyd`], also returning the distortion of each labelling with its own
/// cluster means, starting from the initial assignment.
pub fn lloyd_traced(data: &Matrix, seeds: &SeedSet, max_iter: usize) -> Result<(Partition, Vec<f64>)> {
    let mut trace = Vec::new();
    let p = lloyd_impl(data, seeds, max_iter, Some(&mut trace))?;
    Ok((p, trace))
}

fn lloyd_impl(data: &Matrix, seeds: &SeedSet, max_iter: usize, mut trace: Option<&mut Vec<f64>>) -> Result<Partition> {
    let (n, k) = (data.nrows(), seeds.k());
    if seeds.seeds.ncols() != data.ncols() {
        return Err(FabrikError::InvalidInput(format!(
            "seeds have dimension {} but data has {}",
            seeds.seeds.ncols(),
            data.ncols()
        )));
    }
    if k == 0 || k > n {
        return Err(FabrikError::InvalidK { k, n });
    }
    if max_iter == 0 {
        return Err(FabrikError::InvalidParameter("max_iter must be at least 1".into()));
    }

    let mut centers = seeds.seeds.clone();
    let mut labels = vec![0usize; n];
    let mut dist = vec![0.0; n];
    assign(data, &centers, &mut labels, &mut dist);
    repair_empty(data, &mut centers, &mut labels, &mut dist);

    let mut next = labels.clone();
    let mut iterations = 0;
    let mut stable = false;
    while iterations < max_iter {
        update_means(data, &labels, &mut centers);
        if let Some(t) = trace.as_deref_mut() {
            t.push(total_cost(data, &labels, &centers));
        }
        assign(data, &centers, &mut next, &mut dist);
        repair_empty(data, &mut centers, &mut next, &mut dist);
        iterations += 1;
        std::mem::swap(&mut labels, &mut next);
        if labels == next {
            stable = true;
            break;
        }
    }
    if !stable {
        update_means(data, &labels, &mut centers);
        if let Some(t) = trace {
            t.push(total_cost(data, &labels, &centers));
        }
    }
    let distortion = total_cost(data, &labels, &centers);
    Ok(Partition {
        labels,
        centers,
        iterations,
        distortion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::forgy_init;
    use crate::rng::RngStream;

    fn m(rows: &[Vec<f64>]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn two_pairs_on_a_line() {
        let data = m(&[vec![0.0], vec![1.0], vec![10.0], vec![11.0]]);
        let seeds = SeedSet::explicit(m(&[vec![0.0], vec![10.0]]));
        let p = lloyd(&data, &seeds, 100).unwrap();
        assert_eq!(p.labels, vec![0, 0, 1, 1]);
        assert_eq!(p.centers.row(0), &[0.5]);
        assert_eq!(p.centers.row(1), &[10.5]);
        assert!((p.distortion - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fixed_point_takes_one_round() {
        let data = m(&[vec![0.0, 0.0], vec![2.0, 0.0], vec![10.0, 0.0], vec![12.0, 0.0]]);
        let seeds = SeedSet::explicit(m(&[vec![1.0, 0.0], vec![11.0, 0.0]]));
        let p = lloyd(&data, &seeds, 100).unwrap();
        assert_eq!(p.iterations, 1);
        assert_eq!(p.labels, vec![0, 0, 1, 1]);
    }

    #[test]
    fn single_cluster_is_grand_mean() {
        let data = m(&[vec![1.0, 2.0], vec![3.0, 6.0], vec![5.0, 1.0]]);
        let seeds = SeedSet::explicit(m(&[vec![100.0, 100.0]]));
        let p = lloyd(&data, &seeds, 100).unwrap();
        assert_eq!(p.centers.row(0), &[3.0, 3.0]);
        let tss = 4.0 + 1.0 + 0.0 + 9.0 + 4.0 + 4.0;
        assert!((p.distortion - tss).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let data = m(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        let seeds = SeedSet::explicit(m(&[vec![1.0]]));
        assert!(matches!(lloyd(&data, &seeds, 10), Err(FabrikError::InvalidInput(_))));
    }

    #[test]
    fn duplicate_seeds_are_repaired() {
        let data = m(&[vec![0.0], vec![0.1], vec![5.0], vec![5.2], vec![9.0]]);
        let seeds = SeedSet::explicit(m(&[vec![0.0], vec![0.0], vec![0.0]]));
        let p = lloyd(&data, &seeds, 100).unwrap();
        assert!(p.cluster_sizes().iter().all(|&s| s > 0));
        assert_eq!(p.labels[0], p.labels[1]);
        assert_eq!(p.labels[2], p.labels[3]);
        assert_ne!(p.labels[4], p.labels[0]);
    }

    #[test]
    fn max_iter_bounds_rounds() {
        let mut rng = RngStream::new(3);
        let rows: Vec<Vec<f64>> = (0..60)
            .map(|_| vec![rng.standard_normal(), rng.standard_normal()])
            .collect();
        let data = m(&rows);
        let seeds = forgy_init(&data, 5, &mut rng).unwrap();
        let p = lloyd(&data, &seeds, 1).unwrap();
        assert_eq!(p.iterations, 1);
        let recomputed: f64 = data
            .rows_iter()
            .zip(&p.labels)
            .map(|(x, &l)| squared_euclidean(x, p.centers.row(l)))
            .sum();
        assert!((recomputed - p.distortion).abs() <= 1e-9 * p.distortion);
    }

    #[test]
    fn distortion_trace_non_increasing() {
        let mut rng = RngStream::new(17);
        for _ in 0..200 {
            let n = 5 + rng.below(40);
            let d = 1 + rng.below(4);
            let k = 1 + rng.below(n.min(6));
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..d).map(|_| rng.standard_normal()).collect())
                .collect();
            let data = m(&rows);
            let seeds = forgy_init(&data, k, &mut rng).unwrap();
            let (p, trace) = lloyd_traced(&data, &seeds, 100).unwrap();
            for w in trace.windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-12, "{trace:?}");
            }
            assert!(p.cluster_sizes().iter().all(|&s| s > 0));
        }
    }

    #[test]
    fn deterministic() {
        let mut rng = RngStream::new(4);
        let rows: Vec<Vec<f64>> = (0..50).map(|_| vec![rng.standard_normal(); 3]).collect();
        let data = m(&rows);
        let s1 = forgy_init(&data, 3, &mut RngStream::new(9)).unwrap();
        let s2 = forgy_init(&data, 3, &mut RngStream::new(9)).unwrap();
        assert_eq!(lloyd(&data, &s1, 100).unwrap(), lloyd(&data, &s2, 100).unwrap());
    }
}
