use super::{Provenance, SeedSet};
use crate::error::{FabrikError, Result};
use crate::matrix::{squared_euclidean, Matrix};
use crate::rng::RngStream;

fn check_k(data: &Matrix, k: usize) -> Result<()> {
    if k == 0 || k > data.nrows() {
        return Err(FabrikError::InvalidK { k, n: data.nrows() });
    }
    Ok(())
}

/// Forgy seeding: `k` distinct rows chosen uniformly at random.
pub fn forgy_init(data: &Matrix, k: usize, rng: &mut RngStream) -> Result<SeedSet> {
    check_k(data, k)?;
    let idx = rng.sample_indices(data.nrows(), k);
    Ok(SeedSet {
        seeds: data.select_rows(&idx),
        provenance: Provenance::Forgy,
    })
}

/// k-Means++ seeding: the first seed is uniform, each further seed is drawn
/// with probability proportional to its squared distance to the nearest seed
/// chosen so far. If every remaining row coincides with a seed the draw falls
/// back to uniform over the rows not yet chosen.
pub fn kmeanspp_init(data: &Matrix, k: usize, rng: &mut RngStream) -> Result<SeedSet> {
    check_k(data, k)?;
    let n = data.nrows();
    let mut chosen = Vec::with_capacity(k);
    let mut taken = vec![false; n];
    let first = rng.below(n);
    chosen.push(first);
    taken[first] = true;
    let mut d2: Vec<f64> = data
        .rows_iter()
        .map(|r| squared_euclidean(r, data.row(first)))
        .collect();

    while chosen.len() < k {
        let total: f64 = (0..n).filter(|&i| !taken[i]).map(|i| d2[i]).sum();
        let pick = if total > 0.0 {
            let target = rng.uniform() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for i in (0..n).filter(|&i| !taken[i] && d2[i] > 0.0) {
                acc += d2[i];
                pick = Some(i);
                if acc > target {
                    break;
                }
            }
            pick.expect("positive total weight implies a candidate")
        } else {
            let free: Vec<usize> = (0..n).filter(|&i| !taken[i]).collect();
            free[rng.below(free.len())]
        };
        chosen.push(pick);
        taken[pick] = true;
        let seed = data.row(pick);
        for (i, v) in d2.iter_mut().enumerate() {
            *v = v.min(squared_euclidean(data.row(i), seed));
        }
    }
    Ok(SeedSet {
        seeds: data.select_rows(&chosen),
        provenance: Provenance::KMeansPP,
    })
}
