//! Modified Band Depth of discretized curves.
//!
//! The depth of a curve is the average, over every unordered pair of sample
//! curves, of the fraction of grid columns where it lies inside the pair's
//! pointwise `[min, max]` envelope (both ends inclusive). Pairs that contain the
//! curve itself are counted. Rather than enumerating pairs, each column is
//! sorted once: a value `v` lies outside exactly the pairs drawn entirely from
//! the values strictly below `v` or entirely from those strictly above it.

use crate::error::{FabrikError, Result};
use crate::matrix::Matrix;

#[inline]
fn pairs(n: usize) -> f64 {
    (n * n.saturating_sub(1) / 2) as f64
}

/// Modified Band Depth of every row of `data` with respect to all rows.
pub fn mbd(data: &Matrix) -> Result<Vec<f64>> {
    let (n, d) = (data.nrows(), data.ncols());
    if n < 2 {
        return Err(FabrikError::InsufficientSample { needed: 2, got: n });
    }
    if d == 0 {
        return Err(FabrikError::InvalidInput("curves have no grid columns".into()));
    }
    let total_pairs = pairs(n);
    let mut counts = vec![0.0; n];
    let mut column = vec![0.0; n];
    for j in 0..d {
        for (i, c) in column.iter_mut().enumerate() {
            *c = data.get(i, j);
        }
        column.sort_unstable_by(f64::total_cmp);
        for (i, count) in counts.iter_mut().enumerate() {
            let v = data.get(i, j);
            let below = column.partition_point(|&x| x < v);
            let above = n - column.partition_point(|&x| x <= v);
            *count += total_pairs - pairs(below) - pairs(above);
        }
    }
    let denom = total_pairs * d as f64;
    Ok(counts.into_iter().map(|c| c / denom).collect())
}

/// Index of the deepest row; ties go to the lowest index.
pub fn deepest_index(data: &Matrix) -> Result<usize> {
    match data.nrows() {
        0 => Err(FabrikError::EmptyInput),
        1 => Ok(0),
        _ => {
            let depth = mbd(data)?;
            let mut best = 0;
            for (i, &v) in depth.iter().enumerate().skip(1) {
                if v > depth[best] {
                    best = i;
                }
            }
            Ok(best)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use proptest::prelude::*;

    /// Direct enumeration over all pairs and columns.
    fn mbd_brute(rows: &[Vec<f64>]) -> Vec<f64> {
        let n = rows.len();
        let d = rows[0].len();
        let mut pair_count = 0usize;
        let mut inside = vec![0usize; n];
        for a in 0..n {
            for b in a + 1..n {
                pair_count += 1;
                for (x, cnt) in rows.iter().zip(inside.iter_mut()) {
                    for j in 0..d {
                        let lo = rows[a][j].min(rows[b][j]);
                        let hi = rows[a][j].max(rows[b][j]);
                        if lo <= x[j] && x[j] <= hi {
                            *cnt += 1;
                        }
                    }
                }
            }
        }
        inside.into_iter().map(|c| c as f64 / (pair_count * d) as f64).collect()
    }

    fn m(rows: &[Vec<f64>]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn two_curves_are_both_fully_deep() {
        assert_eq!(mbd(&m(&[vec![0.0, 5.0], vec![3.0, -1.0]])).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn identical_curves() {
        let rows = vec![vec![0.3, 0.1]; 3];
        assert_eq!(mbd(&m(&rows)).unwrap(), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn three_diagonal_points() {
        let rows = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        let oracle = mbd_brute(&rows);
        assert_eq!(oracle, vec![2.0 / 3.0, 1.0, 2.0 / 3.0]);
        let fast = mbd(&m(&rows)).unwrap();
        for (a, b) in fast.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(deepest_index(&m(&rows)).unwrap(), 1);
    }

    #[test]
    fn errors_and_trivial_cases() {
        assert!(matches!(
            mbd(&m(&[vec![1.0]])),
            Err(FabrikError::InsufficientSample { .. })
        ));
        assert_eq!(deepest_index(&Matrix::zeros(0, 3)), Err(FabrikError::EmptyInput));
        assert_eq!(deepest_index(&m(&[vec![4.0, 2.0]])).unwrap(), 0);
    }

    #[test]
    fn median_of_nested_curves_is_deepest() {
        // five parallel curves: shifts of one shape, middle one is the pointwise median
        let base = [0.2, -0.7, 1.3, 0.4];
        let shifts = [2.0, -1.0, 0.5, -3.0, 4.0];
        let rows: Vec<Vec<f64>> = shifts.iter().map(|s| base.iter().map(|b| b + s).collect()).collect();
        let oracle = mbd_brute(&rows);
        let oracle_best = (0..5).fold(0, |b, i| if oracle[i] > oracle[b] { i } else { b });
        assert_eq!(oracle_best, 2);
        assert_eq!(deepest_index(&m(&rows)).unwrap(), 2);
    }

    #[test]
    fn ties_resolve_to_lowest_index() {
        let rows = vec![vec![1.0], vec![0.0], vec![1.0], vec![2.0]];
        let depth = mbd(&m(&rows)).unwrap();
        assert_eq!(depth[0], depth[2]);
        assert_eq!(deepest_index(&m(&rows)).unwrap(), 0);
    }

    #[test]
    fn random_instances_match_enumeration() {
        let mut rng = RngStream::new(2024);
        for _ in 0..500 {
            let n = 2 + rng.below(5);
            let d = 1 + rng.below(4);
            // small integer values force plenty of ties
            let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.below(4) as f64).collect()).collect();
            let fast = mbd(&m(&rows)).unwrap();
            let slow = mbd_brute(&rows);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() < 1e-12, "{rows:?}: {fast:?} vs {slow:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn depths_in_unit_interval_with_self_pair_floor(
            rows in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 3), 2..12)
        ) {
            let n = rows.len();
            let depth = mbd(&m(&rows)).unwrap();
            let floor = (n - 1) as f64 / pairs(n);
            for v in depth {
                prop_assert!(v > 0.0 && v <= 1.0 + 1e-15);
                prop_assert!(v >= floor - 1e-12);
            }
        }

        #[test]
        fn row_permutation_equivariance(
            rows in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 4), 2..10),
            seed in 0u64..1000,
        ) {
            let n = rows.len();
            let perm = RngStream::new(seed).sample_indices(n, n);
            let permuted: Vec<Vec<f64>> = perm.iter().map(|&i| rows[i].clone()).collect();
            let a = mbd(&m(&rows)).unwrap();
            let b = mbd(&m(&permuted)).unwrap();
            for (k, &i) in perm.iter().enumerate() {
                prop_assert!((b[k] - a[i]).abs() < 1e-12);
            }
        }

        #[test]
        fn column_permutation_invariance(
            rows in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 5), 2..10),
            seed in 0u64..1000,
        ) {
            let perm = RngStream::new(seed).sample_indices(5, 5);
            let permuted: Vec<Vec<f64>> =
                rows.iter().map(|r| perm.iter().map(|&j| r[j]).collect()).collect();
            let a = mbd(&m(&rows)).unwrap();
            let b = mbd(&m(&permuted)).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }

        #[test]
        fn monotone_transform_invariance(
            rows in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 4), 2..10),
        ) {
            let transformed: Vec<Vec<f64>> =
                rows.iter().map(|r| r.iter().map(|v| v.exp() * 2.0 - 1.0).collect()).collect();
            prop_assert_eq!(mbd(&m(&rows)).unwrap(), mbd(&m(&transformed)).unwrap());
        }
    }
}
