//! The nine clustering pipelines: three seeding strategies (Forgy, k-Means++,
//! bootstrap + depth) applied to raw data, to spline-smoothed resampled
//! curves, or to spline coefficients.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bspline::{build_basis, BandedDesign, SplineBasis, TimeGrid};
use crate::cluster::{forgy_init, kmeanspp_init, lloyd, pam, Partition, Provenance, SeedSet, DEFAULT_MAX_ITER};
use crate::depth::deepest_index;
use crate::error::{FabrikError, Result};
use crate::eval::metrics::{distortion, distortion_observed};
use crate::mask::Mask;
use crate::matrix::Matrix;
use crate::rng::RngStream;

pub const DEFAULT_BOOTSTRAP: usize = 25;
/// Redraws allowed for a bootstrap sample with fewer than `k` distinct rows.
pub const BOOTSTRAP_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Method {
    Km,
    Kmpp,
    Brik,
    Fkm,
    Fkmpp,
    Fabrik,
    CKm,
    CKmpp,
    CBrik,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seeding {
    Forgy,
    KMeansPP,
    Bootstrap,
}

/// The space k-Means runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Raw,
    Resampled,
    Coefficients,
}

impl Method {
    /// Table order.
    pub const ALL: [Method; 9] = [
        Method::Km,
        Method::Kmpp,
        Method::Brik,
        Method::Fkm,
        Method::Fkmpp,
        Method::Fabrik,
        Method::CKm,
        Method::CKmpp,
        Method::CBrik,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Km => "KM",
            Method::Kmpp => "KMPP",
            Method::Brik => "BRIk",
            Method::Fkm => "FKM",
            Method::Fkmpp => "FKMPP",
            Method::Fabrik => "FABRIk",
            Method::CKm => "C-KM",
            Method::CKmpp => "C-KMPP",
            Method::CBrik => "C-BRIk",
        }
    }

    pub fn seeding(self) -> Seeding {
        match self {
            Method::Km | Method::Fkm | Method::CKm => Seeding::Forgy,
            Method::Kmpp | Method::Fkmpp | Method::CKmpp => Seeding::KMeansPP,
            Method::Brik | Method::Fabrik | Method::CBrik => Seeding::Bootstrap,
        }
    }

    pub fn space(self) -> Space {
        match self {
            Method::Km | Method::Kmpp | Method::Brik => Space::Raw,
            Method::Fkm | Method::Fkmpp | Method::Fabrik => Space::Resampled,
            Method::CKm | Method::CKmpp | Method::CBrik => Space::Coefficients,
        }
    }

    pub fn uses_splines(self) -> bool {
        self.space() != Space::Raw
    }

    /// Position in [`Method::ALL`]; used to derive per-method random streams.
    pub fn code(self) -> u64 {
        Method::ALL.iter().position(|m| *m == self).unwrap() as u64
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = FabrikError;

    /// Case-insensitive; `-` and `_` are interchangeable.
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('_', "-");
        Method::ALL
            .into_iter()
            .find(|m| m.name().to_ascii_uppercase() == norm)
            .ok_or_else(|| FabrikError::InvalidSpec(format!("unknown method '{s}'")))
    }
}

impl From<Method> for String {
    fn from(m: Method) -> String {
        m.name().to_string()
    }
}

impl TryFrom<String> for Method {
    type Error = FabrikError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSpec {
    pub method: Method,
    /// Bootstrap replicates for the depth-seeded methods.
    pub b: usize,
    pub df: usize,
    /// Oversampling factor of the resampled grid.
    pub m: usize,
    pub degree: usize,
    pub max_iter: usize,
}

impl MethodSpec {
    pub fn new(method: Method, df: usize) -> Self {
        MethodSpec {
            method,
            b: DEFAULT_BOOTSTRAP,
            df,
            m: 1,
            degree: 3,
            max_iter: DEFAULT_MAX_ITER,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.method.seeding() == Seeding::Bootstrap && self.b == 0 {
            return Err(FabrikError::InvalidSpec("B must be at least 1".into()));
        }
        if self.method.uses_splines() && self.df < self.degree + 1 {
            return Err(FabrikError::InvalidSpec(format!(
                "df = {} is below degree + 1 = {}",
                self.df,
                self.degree + 1
            )));
        }
        if self.m == 0 {
            return Err(FabrikError::InvalidSpec("m must be at least 1".into()));
        }
        if self.max_iter == 0 {
            return Err(FabrikError::InvalidSpec("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ClusterRun {
    /// Partition in the space the method clusters in.
    pub partition: Partition,
    /// Distortion of the final labels with centroids recomputed from the input rows.
    pub distortion_original: f64,
    /// Seconds, monotonic clock, whole pipeline.
    pub wall_time: f64,
    pub method: MethodSpec,
}

/// Row keys for detecting duplicated rows by exact value.
fn row_key(row: &[f64]) -> Vec<u64> {
    row.iter().map(|v| v.to_bits()).collect()
}

/// Runs Forgy-seeded k-Means on `b` bootstrap resamples of the rows and
/// stacks the resulting centers, replicate by replicate.
///
/// Forgy seeds are drawn among the distinct rows of each resample; a resample
/// with fewer than `k` distinct rows is redrawn.
pub fn bootstrap_centroids(data: &Matrix, k: usize, b: usize, max_iter: usize, rng: &mut RngStream) -> Result<Matrix> {
    let n = data.nrows();
    if k == 0 || k > n {
        return Err(FabrikError::InvalidK { k, n });
    }
    if b == 0 {
        return Err(FabrikError::InvalidParameter("B must be at least 1".into()));
    }
    let mut out = Matrix::zeros(0, data.ncols());
    for _ in 0..b {
        let mut attempt = 0;
        let (sample, distinct) = loop {
            if attempt == BOOTSTRAP_ATTEMPTS {
                return Err(FabrikError::DegenerateBootstrap { k, attempts: attempt });
            }
            attempt += 1;
            let idx: Vec<usize> = (0..n).map(|_| rng.below(n)).collect();
            let mut seen = HashSet::new();
            let distinct: Vec<usize> = idx
                .iter()
                .copied()
                .filter(|&i| seen.insert(row_key(data.row(i))))
                .collect();
            if distinct.len() >= k {
                break (data.select_rows(&idx), data.select_rows(&distinct));
            }
        };
        let seeds = forgy_init(&distinct, k, rng)?;
        let p = lloyd(&sample, &seeds, max_iter)?;
        for c in p.centers.rows_iter() {
            out.push_row(c);
        }
    }
    Ok(out)
}

/// Groups the bootstrap centroids with PAM and takes the deepest member of
/// each group as a seed, in group order.
pub fn brik_seeds(data: &Matrix, k: usize, b: usize, max_iter: usize, rng: &mut RngStream) -> Result<SeedSet> {
    let centroids = bootstrap_centroids(data, k, b, max_iter, rng)?;
    seeds_from_centroids(&centroids, k)
}

/// The PAM + depth stage of [`brik_seeds`] on an explicit centroid set.
pub fn seeds_from_centroids(centroids: &Matrix, k: usize) -> Result<SeedSet> {
    let groups = pam(centroids, k)?;
    let mut seeds = Matrix::zeros(0, centroids.ncols());
    for g in 0..k {
        let members: Vec<usize> = (0..centroids.nrows()).filter(|&i| groups.labels[i] == g).collect();
        let sub = centroids.select_rows(&members);
        seeds.push_row(centroids.row(members[deepest_index(&sub)?]));
    }
    Ok(SeedSet {
        seeds,
        provenance: Provenance::Brik,
    })
}

/// Spline fitting shared by all rows of a dataset: one basis and its banded
/// design on the observation grid.
struct RowFitter {
    basis: Arc<SplineBasis>,
    design: BandedDesign,
}

impl RowFitter {
    fn new(grid: &TimeGrid, df: usize, degree: usize) -> Result<Self> {
        let basis = Arc::new(build_basis(grid, df, degree)?);
        let design = BandedDesign::new(&basis, grid.points())?;
        Ok(RowFitter { basis, design })
    }

    /// Coefficients of row `i`, using only observed cells under a mask.
    fn fit(&self, data: &Matrix, mask: Option<&Mask>, i: usize) -> Result<Vec<f64>> {
        let row = data.row(i);
        match mask {
            Some(m) if !m.row(i).iter().all(|&o| o) => {
                let obs: Vec<usize> = (0..row.len()).filter(|&j| m.is_observed(i, j)).collect();
                if obs.len() < self.basis.n_basis() {
                    return Err(FabrikError::InsufficientData(format!(
                        "row {i} has {} observed values, {} needed",
                        obs.len(),
                        self.basis.n_basis()
                    )));
                }
                let y: Vec<f64> = obs.iter().map(|&j| row[j]).collect();
                self.design.fit_rows(&obs, &y)
            }
            _ => self.design.fit(row),
        }
    }
}

fn check_shape(data: &Matrix, grid: &TimeGrid, mask: Option<&Mask>) -> Result<()> {
    if data.ncols() != grid.len() {
        return Err(FabrikError::InvalidInput(format!(
            "data has {} columns but the grid has {} points",
            data.ncols(),
            grid.len()
        )));
    }
    if let Some(m) = mask {
        if m.nrows() != data.nrows() || m.ncols() != data.ncols() {
            return Err(FabrikError::InvalidMask("mask shape differs from data".into()));
        }
    }
    Ok(())
}

/// Fits every row and evaluates the fits on `m · d` evenly spaced points over the grid's range.
pub fn smooth_and_resample(
    data: &Matrix,
    grid: &TimeGrid,
    df: usize,
    degree: usize,
    m: usize,
    mask: Option<&Mask>,
) -> Result<Matrix> {
    check_shape(data, grid, mask)?;
    let fitter = RowFitter::new(grid, df, degree)?;
    let out_grid = grid.oversampled(m)?;
    let out_design = BandedDesign::new(&fitter.basis, out_grid.points())?;
    let mut out = Matrix::zeros(data.nrows(), out_grid.len());
    for i in 0..data.nrows() {
        let c = fitter.fit(data, mask, i)?;
        out_design.evaluate_into(&c, out.row_mut(i));
    }
    Ok(out)
}

/// One row of spline coefficients per curve.
pub fn spline_coefficients(
    data: &Matrix,
    grid: &TimeGrid,
    df: usize,
    degree: usize,
    mask: Option<&Mask>,
) -> Result<Matrix> {
    check_shape(data, grid, mask)?;
    let fitter = RowFitter::new(grid, df, degree)?;
    let mut out = Matrix::zeros(data.nrows(), fitter.basis.n_basis());
    for i in 0..data.nrows() {
        let c = fitter.fit(data, mask, i)?;
        out.row_mut(i).copy_from_slice(&c);
    }
    Ok(out)
}

/// Fills gaps by linear interpolation between the nearest observed neighbours.
pub fn impute_linear(row: &[Option<f64>], grid: &TimeGrid) -> Result<Vec<f64>> {
    if row.len() != grid.len() {
        return Err(FabrikError::LengthMismatch(row.len(), grid.len()));
    }
    if row.first().is_some_and(Option::is_none) || row.last().is_some_and(Option::is_none) {
        return Err(FabrikError::InvalidMask(
            "first and last values must be observed".into(),
        ));
    }
    let t = grid.points();
    let mut out = Vec::with_capacity(row.len());
    let mut prev = 0;
    for j in 0..row.len() {
        match row[j] {
            Some(v) => {
                out.push(v);
                prev = j;
            }
            None => {
                let next = (j + 1..row.len()).find(|&q| row[q].is_some()).unwrap();
                let (y0, y1) = (row[prev].unwrap(), row[next].unwrap());
                let w = (t[j] - t[prev]) / (t[next] - t[prev]);
                out.push(y0 + w * (y1 - y0));
            }
        }
    }
    Ok(out)
}

/// [`impute_linear`] applied to every row with missing cells.
pub fn impute_dataset(data: &Matrix, grid: &TimeGrid, mask: &Mask) -> Result<Matrix> {
    check_shape(data, grid, Some(mask))?;
    let mut out = data.clone();
    for i in 0..data.nrows() {
        if mask.row(i).iter().all(|&o| o) {
            continue;
        }
        let row: Vec<Option<f64>> = data
            .row(i)
            .iter()
            .zip(mask.row(i))
            .map(|(&v, &o)| o.then_some(v))
            .collect();
        out.row_mut(i).copy_from_slice(&impute_linear(&row, grid)?);
    }
    Ok(out)
}

fn seed(space: &Matrix, k: usize, spec: &MethodSpec, rng: &mut RngStream) -> Result<SeedSet> {
    match spec.method.seeding() {
        Seeding::Forgy => forgy_init(space, k, rng),
        Seeding::KMeansPP => kmeanspp_init(space, k, rng),
        Seeding::Bootstrap => {
            let mut s = brik_seeds(space, k, spec.b, spec.max_iter, rng)?;
            if spec.method == Method::Fabrik {
                s.provenance = Provenance::Fabrik;
            }
            Ok(s)
        }
    }
}

/// Runs one method end to end.
///
/// Missing cells (per `mask`) are filled by [`impute_linear`] for the raw-data
/// methods; the spline methods fit observed cells only. The reported
/// distortion is measured on the input rows, over observed cells when a mask
/// is given.
pub fn run_method(
    data: &Matrix,
    grid: &TimeGrid,
    mask: Option<&Mask>,
    k: usize,
    spec: &MethodSpec,
    rng: &mut RngStream,
) -> Result<ClusterRun> {
    let start = Instant::now();
    spec.validate()?;
    check_shape(data, grid, mask)?;
    let mask = mask.filter(|m| !m.is_complete());
    let space = match spec.method.space() {
        Space::Raw => match mask {
            Some(m) => impute_dataset(data, grid, m)?,
            None => data.clone(),
        },
        Space::Resampled => smooth_and_resample(data, grid, spec.df, spec.degree, spec.m, mask)?,
        Space::Coefficients => spline_coefficients(data, grid, spec.df, spec.degree, mask)?,
    };
    let seeds = seed(&space, k, spec, rng)?;
    let partition = lloyd(&space, &seeds, spec.max_iter)?;
    let distortion_original = match mask {
        Some(m) => distortion_observed(data, m, &partition.labels)?,
        None => distortion(data, &partition.labels)?,
    };
    Ok(ClusterRun {
        partition,
        distortion_original,
        wall_time: start.elapsed().as_secs_f64(),
        method: spec.clone(),
    })
}
