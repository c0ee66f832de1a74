//! k-Means (Lloyd) with Forgy, k-Means++ or explicit seeds, and PAM k-medoids.

mod init;
mod lloyd;
mod pam;

use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;

pub use init::{forgy_init, kmeanspp_init};
pub use lloyd::{lloyd, lloyd_traced, nearest_center, DEFAULT_MAX_ITER};
pub use pam::{pam, PamResult};

/// Where a set of initial centers came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Forgy,
    KMeansPP,
    Brik,
    Fabrik,
    Explicit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedSet {
    pub seeds: Matrix,
    pub provenance: Provenance,
}

impl SeedSet {
    pub fn explicit(seeds: Matrix) -> Self {
        SeedSet {
            seeds,
            provenance: Provenance::Explicit,
        }
    }

    pub fn k(&self) -> usize {
        self.seeds.nrows()
    }
}

/// Result of a k-Means run.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub labels: Vec<usize>,
    pub centers: Matrix,
    /// Assignment/update rounds performed after the initial assignment.
    pub iterations: usize,
    /// Sum of squared distances from each row to its center.
    pub distortion: f64,
}

impl Partition {
    pub fn k(&self) -> usize {
        self.centers.nrows()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k()];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }
}
