//! The four simulated functional models and missing-data injection.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bspline::TimeGrid;
use crate::error::{FabrikError, Result};
use crate::mask::Mask;
use crate::matrix::Matrix;
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelId {
    M1,
    M2,
    M3,
    M4,
}

impl ModelId {
    pub const ALL: [ModelId; 4] = [ModelId::M1, ModelId::M2, ModelId::M3, ModelId::M4];

    pub fn grid(self) -> TimeGrid {
        let (lo, hi, n) = match self {
            ModelId::M1 | ModelId::M2 => (0.0, 1.0, 101),
            ModelId::M3 => (-10.0, 10.0, 201),
            ModelId::M4 => (0.0, 1.0, 21),
        };
        TimeGrid::uniform(lo, hi, n).expect("model grids are valid")
    }

    pub fn n_clusters(self) -> usize {
        match self {
            ModelId::M3 => 5,
            _ => 4,
        }
    }

    /// Spline degrees of freedom chosen for this model by the elbow rule.
    pub fn default_df(self) -> usize {
        match self {
            ModelId::M1 => 15,
            ModelId::M2 => 4,
            ModelId::M3 => 13,
            ModelId::M4 => 4,
        }
    }

    /// Mean curve of cluster `g` (zero-based) at time `x`.
    pub fn signal(self, g: usize, x: f64) -> f64 {
        let gauss = |mu: f64, s: f64| (-(x - mu).powi(2) / (2.0 * s * s)).exp();
        let inv_sqrt_2pi = 1.0 / (2.0 * PI).sqrt();
        match (self, g) {
            (ModelId::M1, 0) => x - 0.5,
            (ModelId::M1, 1) => (x - 0.5).powi(2) - 0.8,
            (ModelId::M1, 2) => -(x - 0.5).powi(2) + 0.7,
            (ModelId::M1, 3) => 0.75 * (8.0 * PI * x).sin(),
            (ModelId::M2, 0) => x,
            (ModelId::M2, 1) => 2.0 * (x - 0.5).powi(2) - 0.25,
            (ModelId::M2, 2) => -2.0 * (x - 0.5).powi(2) + 0.3,
            (ModelId::M2, 3) => 0.6 * (2.0 * PI * x - 0.5).sin(),
            (ModelId::M3, 0) => inv_sqrt_2pi / 2.0 * gauss(0.0, 2.0),
            (ModelId::M3, 1) => inv_sqrt_2pi * gauss(-2.0, 1.0),
            (ModelId::M3, 2) => inv_sqrt_2pi * gauss(2.0, 1.0),
            (ModelId::M3, 3) => -inv_sqrt_2pi * gauss(0.0, 1.0) + 0.4,
            (ModelId::M3, 4) => -2.0 * inv_sqrt_2pi / 3.0 * gauss(0.0, 3.0) + 0.4,
            (ModelId::M4, 0) => x - 1.0,
            (ModelId::M4, 1) => x * x,
            (ModelId::M4, 2) => x * x * x,
            (ModelId::M4, 3) => x.sqrt(),
            _ => panic!("model {self} has no cluster {g}"),
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModelId::M1 => "M1",
            ModelId::M2 => "M2",
            ModelId::M3 => "M3",
            ModelId::M4 => "M4",
        };
        f.write_str(s)
    }
}

impl FromStr for ModelId {
    type Err = FabrikError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "M1" | "1" => Ok(ModelId::M1),
            "M2" | "2" => Ok(ModelId::M2),
            "M3" | "3" => Ok(ModelId::M3),
            "M4" | "4" => Ok(ModelId::M4),
            other => Err(FabrikError::InvalidParameter(format!("unknown model '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub id: ModelId,
    pub sigma: f64,
    pub n_per_cluster: usize,
}

impl ModelSpec {
    pub fn new(id: ModelId, sigma: f64) -> Self {
        ModelSpec {
            id,
            sigma,
            n_per_cluster: 25,
        }
    }

    pub fn grid(&self) -> TimeGrid {
        self.id.grid()
    }

    pub fn default_df(&self) -> usize {
        self.id.default_df()
    }
}

/// Curves with optional ground-truth labels and missingness.
///
/// Cells flagged missing by `mask` hold `NaN` in `data`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub data: Matrix,
    pub truth: Option<Vec<usize>>,
    pub grid: TimeGrid,
    pub mask: Option<Mask>,
}

impl LabeledDataset {
    pub fn n_clusters(&self) -> Option<usize> {
        self.truth
            .as_ref()
            .map(|t| t.iter().copied().max().map_or(0, |m| m + 1))
    }
}

/// Draws `n_per_cluster` noisy copies of each cluster signal, in cluster order.
pub fn generate(model: &ModelSpec, rng: &mut RngStream) -> Result<LabeledDataset> {
    if !model.sigma.is_finite() || model.sigma < 0.0 {
        return Err(FabrikError::InvalidParameter(format!(
            "noise level must be a non-negative number, got {}",
            model.sigma
        )));
    }
    if model.n_per_cluster == 0 {
        return Err(FabrikError::InvalidParameter("n_per_cluster must be positive".into()));
    }
    let grid = model.grid();
    let k = model.id.n_clusters();
    let d = grid.len();
    let mut data = Matrix::zeros(k * model.n_per_cluster, d);
    let mut truth = Vec::with_capacity(k * model.n_per_cluster);
    let mut i = 0;
    for g in 0..k {
        let signal: Vec<f64> = grid.points().iter().map(|&x| model.id.signal(g, x)).collect();
        for _ in 0..model.n_per_cluster {
            let row = data.row_mut(i);
            if model.sigma == 0.0 {
                row.copy_from_slice(&signal);
            } else {
                for (v, s) in row.iter_mut().zip(&signal) {
                    *v = s + model.sigma * rng.standard_normal();
                }
            }
            truth.push(g);
            i += 1;
        }
    }
    Ok(LabeledDataset {
        data,
        truth: Some(truth),
        grid,
        mask: None,
    })
}

/// Number of interior cells removed per row: `round(p · (d − 2))`.
pub fn missing_per_row(p: f64, d: usize) -> usize {
    (p * d.saturating_sub(2) as f64).round() as usize
}

/// Masks `round(p·(d−2))` interior cells of every row, chosen uniformly
/// without replacement; the first and last cells are never removed.
pub fn inject_missing(ds: &LabeledDataset, p: f64, rng: &mut RngStream) -> Result<LabeledDataset> {
    if !(0.0..1.0).contains(&p) {
        return Err(FabrikError::InvalidProportion(p));
    }
    let (n, d) = (ds.data.nrows(), ds.data.ncols());
    let per_row = missing_per_row(p, d);
    let mut mask = ds.mask.clone().unwrap_or_else(|| Mask::all_observed(n, d));
    let mut data = ds.data.clone();
    for i in 0..n {
        if per_row == 0 {
            break;
        }
        for j in rng.sample_indices(d - 2, per_row) {
            mask.set_missing(i, j + 1);
            data.set(i, j + 1, f64::NAN);
        }
    }
    Ok(LabeledDataset {
        data,
        truth: ds.truth.clone(),
        grid: ds.grid.clone(),
        mask: Some(mask),
    })
}
