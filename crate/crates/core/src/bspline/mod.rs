//! Clamped B-spline bases, least-squares curve fitting and evaluation.
//!
//! A basis is described by its degree and its degrees of freedom `df`: a basis
//! with `df = n` has `n − degree` uniformly spaced internal knots, so a cubic
//! basis with `df = 15` places 12 knots at `i/13` on the unit interval. The
//! boundary knots are repeated `degree + 1` times. The resulting spline space
//! has dimension `df + 1`; since the clamped functions sum to one it contains
//! the constants, and no separate intercept column is ever added.

mod lstsq;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{FabrikError, Result};
use crate::matrix::Matrix;

pub use lstsq::least_squares;

/// Strictly increasing sample times shared by every curve of a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TimeGrid {
    points: Vec<f64>,
}

impl TimeGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(FabrikError::InvalidGrid(format!(
                "need at least 2 points, got {}",
                points.len()
            )));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(FabrikError::InvalidGrid("non-finite time value".into()));
        }
        if let Some(i) = points.windows(2).position(|w| w[1] <= w[0]) {
            return Err(FabrikError::InvalidGrid(format!(
                "not strictly increasing at position {}",
                i + 1
            )));
        }
        Ok(TimeGrid { points })
    }

    /// `n` evenly spaced points from `lo` to `hi`, both included exactly.
    pub fn uniform(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || hi.is_nan() || lo.is_nan() || hi <= lo {
            return Err(FabrikError::InvalidGrid(format!(
                "cannot place {n} points on [{lo}, {hi}]"
            )));
        }
        let step = (hi - lo) / (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|i| lo + i as f64 * step).collect();
        points[n - 1] = hi;
        TimeGrid::new(points)
    }

    /// Evenly spaced grid over the same domain with `m` times as many points.
    pub fn oversampled(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(FabrikError::InvalidParameter(
                "oversampling factor must be at least 1".into(),
            ));
        }
        TimeGrid::uniform(self.min(), self.max(), m * self.len())
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.points[0]
    }

    pub fn max(&self) -> f64 {
        self.points[self.points.len() - 1]
    }
}

impl TryFrom<Vec<f64>> for TimeGrid {
    type Error = FabrikError;
    fn try_from(points: Vec<f64>) -> Result<Self> {
        TimeGrid::new(points)
    }
}

impl From<TimeGrid> for Vec<f64> {
    fn from(g: TimeGrid) -> Self {
        g.points
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplineBasis {
    degree: usize,
    df: usize,
    lo: f64,
    hi: f64,
    knots: Vec<f64>,
}

impl SplineBasis {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn df(&self) -> usize {
        self.df
    }

    /// Number of basis functions, which is also the coefficient count of a fit.
    pub fn n_basis(&self) -> usize {
        self.knots.len() - self.degree - 1
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn internal_knots(&self) -> &[f64] {
        &self.knots[self.degree + 1..self.knots.len() - self.degree - 1]
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if t >= self.lo && t <= self.hi {
            Ok(())
        } else {
            Err(FabrikError::OutOfDomain {
                point: t,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }

    /// Knot span `i` with `knots[i] <= t < knots[i + 1]`; the right endpoint
    /// belongs to the last non-empty span.
    fn span(&self, t: f64) -> usize {
        let last = self.n_basis() - 1;
        if t >= self.knots[last + 1] {
            return last;
        }
        let (mut lo, mut hi) = (self.degree, last + 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if t < self.knots[mid] {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo
    }

    /// The `degree + 1` possibly nonzero basis values at `t`, and the index of the first one.
    pub fn nonzero_at(&self, t: f64) -> Result<(usize, Vec<f64>)> {
        self.check_domain(t)?;
        let p = self.degree;
        let span = self.span(t);
        let k = &self.knots;
        let mut values = vec![0.0; p + 1];
        let mut left = vec![0.0; p + 1];
        let mut right = vec![0.0; p + 1];
        values[0] = 1.0;
        for j in 1..=p {
            left[j] = t - k[span + 1 - j];
            right[j] = k[span + j] - t;
            let mut saved = 0.0;
            for r in 0..j {
                let temp = values[r] / (right[r + 1] + left[j - r]);
                values[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            values[j] = saved;
        }
        Ok((span - p, values))
    }

    /// Design matrix with one row per point and one column per basis function.
    pub fn design(&self, points: &[f64]) -> Result<Matrix> {
        let n = self.n_basis();
        let mut m = Matrix::zeros(points.len(), n);
        for (i, &t) in points.iter().enumerate() {
            let (first, values) = self.nonzero_at(t)?;
            m.row_mut(i)[first..first + values.len()].copy_from_slice(&values);
        }
        Ok(m)
    }
}

/// Builds the clamped basis of the given degree with `df − degree` uniform
/// internal knots over the grid's range.
pub fn build_basis(grid: &TimeGrid, df: usize, degree: usize) -> Result<SplineBasis> {
    if df < degree + 1 {
        return Err(FabrikError::InvalidParameter(format!(
            "df = {df} must be at least degree + 1 = {}",
            degree + 1
        )));
    }
    let (lo, hi) = (grid.min(), grid.max());
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        return Err(FabrikError::InvalidGrid("degenerate domain".into()));
    }
    let n_internal = df - degree;
    let mut knots = Vec::with_capacity(n_internal + 2 * (degree + 1));
    knots.extend(std::iter::repeat_n(lo, degree + 1));
    let width = hi - lo;
    for i in 1..=n_internal {
        knots.push(lo + width * i as f64 / (n_internal + 1) as f64);
    }
    knots.extend(std::iter::repeat_n(hi, degree + 1));
    Ok(SplineBasis {
        degree,
        df,
        lo,
        hi,
        knots,
    })
}

/// Basis functions evaluated on `eval_grid`, one row per grid point.
pub fn basis_matrix(basis: &SplineBasis, eval_grid: &TimeGrid) -> Result<Matrix> {
    basis.design(eval_grid.points())
}

/// Coefficients minimizing `‖basis_mat · c − y‖²`.
pub fn fit_curve(y: &[f64], basis_mat: &Matrix) -> Result<Vec<f64>> {
    least_squares(basis_mat, y)
}

/// Least-squares fit from the observed `(t, y)` pairs of a partially observed curve.
pub fn fit_sparse(t_obs: &[f64], y_obs: &[f64], basis: &Arc<SplineBasis>) -> Result<SplineFit> {
    if t_obs.len() != y_obs.len() {
        return Err(FabrikError::InvalidInput(format!(
            "{} observation times but {} values",
            t_obs.len(),
            y_obs.len()
        )));
    }
    if t_obs.len() < basis.n_basis() {
        return Err(FabrikError::InsufficientData(format!(
            "{} observations cannot determine {} spline coefficients",
            t_obs.len(),
            basis.n_basis()
        )));
    }
    let design = basis.design(t_obs)?;
    let coefficients = fit_curve(y_obs, &design)?;
    Ok(SplineFit {
        basis: Arc::clone(basis),
        coefficients,
    })
}

/// Fitted spline values on `eval_grid`.
pub fn evaluate(fit: &SplineFit, eval_grid: &TimeGrid) -> Result<Vec<f64>> {
    fit.evaluate(eval_grid)
}

/// A basis evaluated at fixed points, stored as the `degree + 1` possibly
/// nonzero values per point. Fitting many curves observed on the same points
/// (or on subsets of them) reuses it.
#[derive(Debug, Clone)]
pub struct BandedDesign {
    n_basis: usize,
    width: usize,
    first: Vec<usize>,
    values: Vec<f64>,
}

impl BandedDesign {
    pub fn new(basis: &SplineBasis, points: &[f64]) -> Result<Self> {
        let width = basis.degree + 1;
        let mut first = Vec::with_capacity(points.len());
        let mut values = Vec::with_capacity(points.len() * width);
        for &t in points {
            let (f, v) = basis.nonzero_at(t)?;
            first.push(f);
            values.extend_from_slice(&v);
        }
        Ok(BandedDesign {
            n_basis: basis.n_basis(),
            width,
            first,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.first.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.width..(i + 1) * self.width]
    }

    /// Least-squares coefficients from the values `y[i]` at points `rows[i]`.
    pub fn fit_rows(&self, rows: &[usize], y: &[f64]) -> Result<Vec<f64>> {
        if rows.len() != y.len() {
            return Err(FabrikError::LengthMismatch(rows.len(), y.len()));
        }
        let mut qr = lstsq::GivensQr::new(self.n_basis);
        let mut work = vec![0.0; self.n_basis];
        for (&i, &yi) in rows.iter().zip(y) {
            qr.absorb_span(self.first[i], self.row(i), yi, &mut work);
        }
        qr.solve()
    }

    /// Least-squares coefficients from values at every point.
    pub fn fit(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.len() {
            return Err(FabrikError::LengthMismatch(y.len(), self.len()));
        }
        let mut qr = lstsq::GivensQr::new(self.n_basis);
        let mut work = vec![0.0; self.n_basis];
        for (i, &yi) in y.iter().enumerate() {
            qr.absorb_span(self.first[i], self.row(i), yi, &mut work);
        }
        qr.solve()
    }

    /// Spline values at the points, written into `out`.
    pub fn evaluate_into(&self, coefficients: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let f = self.first[i];
            *o = self
                .row(i)
                .iter()
                .zip(&coefficients[f..f + self.width])
                .map(|(b, c)| b * c)
                .sum();
        }
    }
}

#[derive(Debug, Clone)]
pub struct SplineFit {
    basis: Arc<SplineBasis>,
    coefficients: Vec<f64>,
}

impl SplineFit {
    pub fn new(basis: Arc<SplineBasis>, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != basis.n_basis() {
            return Err(FabrikError::InvalidInput(format!(
                "{} coefficients for a basis of {} functions",
                coefficients.len(),
                basis.n_basis()
            )));
        }
        Ok(SplineFit { basis, coefficients })
    }

    /// Fits a fully observed curve sampled on `grid`.
    pub fn fit(basis: Arc<SplineBasis>, grid: &TimeGrid, y: &[f64]) -> Result<Self> {
        let design = basis_matrix(&basis, grid)?;
        let coefficients = fit_curve(y, &design)?;
        Ok(SplineFit { basis, coefficients })
    }

    pub fn basis(&self) -> &SplineBasis {
        &self.basis
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn evaluate(&self, eval_grid: &TimeGrid) -> Result<Vec<f64>> {
        Ok(basis_matrix(&self.basis, eval_grid)?.mul_vec(&self.coefficients))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_grid(n: usize) -> TimeGrid {
        TimeGrid::uniform(0.0, 1.0, n).unwrap()
    }

    /// Textbook Cox–de Boor recursion with the right endpoint closed on the last non-empty span.
    fn cox_de_boor(knots: &[f64], i: usize, p: usize, t: f64) -> f64 {
        if p == 0 {
            let last_nonempty = knots.iter().rposition(|&k| k < *knots.last().unwrap()).unwrap();
            let inside = knots[i] <= t && t < knots[i + 1];
            let at_end = i == last_nonempty && t == knots[i + 1];
            return if inside || at_end { 1.0 } else { 0.0 };
        }
        let mut v = 0.0;
        let d1 = knots[i + p] - knots[i];
        if d1 > 0.0 {
            v += (t - knots[i]) / d1 * cox_de_boor(knots, i, p - 1, t);
        }
        let d2 = knots[i + p + 1] - knots[i + 1];
        if d2 > 0.0 {
            v += (knots[i + p + 1] - t) / d2 * cox_de_boor(knots, i + 1, p - 1, t);
        }
        v
    }

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(vec![0.0]).is_err());
        assert!(TimeGrid::new(vec![0.0, 0.0, 1.0]).is_err());
        assert!(TimeGrid::new(vec![0.0, f64::NAN]).is_err());
        let g = unit_grid(101);
        assert_eq!(g.max(), 1.0);
        assert!((g.points()[50] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn df4_cubic_has_one_internal_knot() {
        let b = build_basis(&unit_grid(101), 4, 3).unwrap();
        assert_eq!(b.internal_knots(), &[0.5]);
        assert_eq!(b.n_basis(), 5);
        assert_eq!(&b.knots()[..4], &[0.0; 4]);
        assert_eq!(&b.knots()[b.knots().len() - 4..], &[1.0; 4]);
    }

    #[test]
    fn df15_cubic_knots_at_thirteenths() {
        let b = build_basis(&unit_grid(101), 15, 3).unwrap();
        let ik = b.internal_knots();
        assert_eq!(ik.len(), 12);
        // spacing computed independently: consecutive gaps and offsets all 1/13
        let mut prev = 0.0;
        for (i, &k) in ik.iter().enumerate() {
            assert!((k - (i + 1) as f64 / 13.0).abs() < 1e-15);
            assert!((k - prev - 1.0 / 13.0).abs() < 1e-14);
            prev = k;
        }
        assert!((1.0 - prev - 1.0 / 13.0).abs() < 1e-14);
    }

    #[test]
    fn df_below_degree_plus_one_rejected() {
        let err = build_basis(&unit_grid(10), 3, 3).unwrap_err();
        assert!(matches!(err, FabrikError::InvalidParameter(_)));
    }

    #[test]
    fn clamped_endpoint_rows() {
        let b = build_basis(&unit_grid(11), 4, 3).unwrap();
        let m = b.design(&[0.0, 1.0]).unwrap();
        assert_eq!(m.row(0), &[1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(m.row(1), &[0.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn out_of_domain_is_error() {
        let b = build_basis(&unit_grid(11), 6, 3).unwrap();
        assert!(matches!(
            b.design(&[0.5, 1.0 + 1e-12]),
            Err(FabrikError::OutOfDomain { .. })
        ));
        assert!(b.design(&[-0.1]).is_err());
    }

    #[test]
    fn df5_row_at_half_matches_reference_values() {
        // knots (0,0,0,0,1/3,2/3,1,1,1,1); values computed with scipy.interpolate.BSpline
        let b = build_basis(&unit_grid(11), 5, 3).unwrap();
        let row = b.design(&[0.5]).unwrap();
        let expected = [0.0, 0.03125, 0.46875, 0.46875, 0.03125, 0.0];
        for (a, e) in row.row(0).iter().zip(expected) {
            assert!((a - e).abs() < 1e-14, "{:?}", row.row(0));
        }
    }

    #[test]
    fn matches_recursive_oracle() {
        for (df, degree) in [(4, 3), (5, 3), (9, 3), (15, 3), (3, 2), (2, 1)] {
            let b = build_basis(&TimeGrid::uniform(-2.0, 3.0, 7).unwrap(), df, degree).unwrap();
            for i in 0..=97 {
                let t = -2.0 + 5.0 * i as f64 / 97.0;
                let t = if i == 97 { 3.0 } else { t };
                let row = b.design(&[t]).unwrap();
                for j in 0..b.n_basis() {
                    let oracle = cox_de_boor(b.knots(), j, degree, t);
                    assert!(
                        (row.get(0, j) - oracle).abs() < 1e-13,
                        "df {df} deg {degree} t {t} j {j}: {} vs {oracle}",
                        row.get(0, j)
                    );
                }
            }
        }
    }

    #[test]
    fn line_reproduced_by_cubic_fit() {
        let g = unit_grid(101);
        let b = Arc::new(build_basis(&g, 4, 3).unwrap());
        let y: Vec<f64> = g.points().iter().map(|x| x - 0.5).collect();
        let fit = SplineFit::fit(b, &g, &y).unwrap();
        let back = fit.evaluate(&g).unwrap();
        for (a, e) in back.iter().zip(&y) {
            assert!((a - e).abs() < 1e-8);
        }
    }

    fn residual(g: &TimeGrid, y: &[f64], df: usize) -> f64 {
        let b = build_basis(g, df, 3).unwrap();
        let m = basis_matrix(&b, g).unwrap();
        let c = fit_curve(y, &m).unwrap();
        m.mul_vec(&c)
            .iter()
            .zip(y)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    #[test]
    fn more_knots_fit_sine_better() {
        let g = unit_grid(101);
        let y: Vec<f64> = g
            .points()
            .iter()
            .map(|x| 0.75 * (8.0 * std::f64::consts::PI * x).sin())
            .collect();
        let r15 = residual(&g, &y, 15);
        let r4 = residual(&g, &y, 4);
        assert!(r15 < r4, "{r15} vs {r4}");
    }

    #[test]
    fn residual_non_increasing_on_nested_knots() {
        // df 4 has knot {1/2}; df 6 has {1/4, 1/2, 3/4}; df 10 has {1/8, ..., 7/8}
        let g = unit_grid(101);
        let y: Vec<f64> = g.points().iter().map(|x| (5.0 * x).exp().sin() + x * x).collect();
        let (r4, r6, r10) = (residual(&g, &y, 4), residual(&g, &y, 6), residual(&g, &y, 10));
        assert!(r6 <= r4 + 1e-12 && r10 <= r6 + 1e-12, "{r4} {r6} {r10}");
    }

    #[test]
    fn zero_curve_gives_zero_coefficients() {
        let g = unit_grid(51);
        let b = Arc::new(build_basis(&g, 9, 3).unwrap());
        let fit = SplineFit::fit(b, &g, &vec![0.0; 51]).unwrap();
        assert!(fit.coefficients().iter().all(|c| c.abs() < 1e-12));
        assert!(fit.evaluate(&g).unwrap().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn sparse_with_full_data_equals_dense_fit() {
        let g = unit_grid(101);
        let b = Arc::new(build_basis(&g, 15, 3).unwrap());
        let y: Vec<f64> = g.points().iter().map(|x| (7.0 * x).cos() - x).collect();
        let dense = SplineFit::fit(Arc::clone(&b), &g, &y).unwrap();
        let sparse = fit_sparse(g.points(), &y, &b).unwrap();
        for (a, s) in dense.coefficients().iter().zip(sparse.coefficients()) {
            assert_eq!(a.to_bits(), s.to_bits());
        }
    }

    #[test]
    fn banded_design_matches_dense_path() {
        let g = unit_grid(101);
        let b = Arc::new(build_basis(&g, 15, 3).unwrap());
        let y: Vec<f64> = g.points().iter().map(|x| (11.0 * x).sin() + x * x).collect();
        let banded = BandedDesign::new(&b, g.points()).unwrap();
        assert_eq!(banded.len(), 101);
        let c = banded.fit(&y).unwrap();
        let dense = SplineFit::fit(Arc::clone(&b), &g, &y).unwrap();
        for (a, d) in c.iter().zip(dense.coefficients()) {
            assert_eq!(a.to_bits(), d.to_bits());
        }
        let keep: Vec<usize> = (0..101).filter(|i| i % 3 != 1).collect();
        let t: Vec<f64> = keep.iter().map(|&i| g.points()[i]).collect();
        let yk: Vec<f64> = keep.iter().map(|&i| y[i]).collect();
        let cs = banded.fit_rows(&keep, &yk).unwrap();
        let sparse = fit_sparse(&t, &yk, &b).unwrap();
        for (a, d) in cs.iter().zip(sparse.coefficients()) {
            assert_eq!(a.to_bits(), d.to_bits());
        }
        let mut out = vec![0.0; 101];
        banded.evaluate_into(&c, &mut out);
        for (o, e) in out.iter().zip(dense.evaluate(&g).unwrap()) {
            assert!((o - e).abs() <= 1e-15 * (1.0 + e.abs()));
        }
        assert!(banded.fit(&y[..5]).is_err());
        assert!(matches!(
            banded.fit_rows(&keep[..10], &yk[..10]),
            Err(FabrikError::SingularFit { .. })
        ));
    }

    #[test]
    fn sparse_line_recovers_removed_points() {
        let g = unit_grid(21);
        let b = Arc::new(build_basis(&g, 4, 3).unwrap());
        // drop every other interior point
        let keep: Vec<usize> = (0..21).filter(|i| i % 2 == 0 || *i == 20).collect();
        let t: Vec<f64> = keep.iter().map(|&i| g.points()[i]).collect();
        let fit = fit_sparse(&t, &t, &b).unwrap();
        let all = fit.evaluate(&g).unwrap();
        for (v, x) in all.iter().zip(g.points()) {
            assert!((v - x).abs() < 1e-8);
        }
    }

    #[test]
    fn sparse_needs_enough_observations() {
        let g = unit_grid(21);
        let b = Arc::new(build_basis(&g, 6, 3).unwrap());
        let t = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
        assert!(matches!(fit_sparse(&t, &t, &b), Err(FabrikError::InsufficientData(_))));
        assert!(fit_sparse(&t[..3], &t, &b).is_err());
    }

    #[test]
    fn oversampled_grid_shape() {
        let g = unit_grid(101);
        let o = g.oversampled(2).unwrap();
        assert_eq!(o.len(), 202);
        assert_eq!((o.min(), o.max()), (0.0, 1.0));
        let step = o.points()[1] - o.points()[0];
        for w in o.points().windows(2) {
            assert!(((w[1] - w[0]) - step).abs() < 1e-12);
        }
    }

    #[test]
    fn evaluate_at_fit_grid_is_design_times_coefficients() {
        let g = unit_grid(31);
        let b = Arc::new(build_basis(&g, 7, 3).unwrap());
        let y: Vec<f64> = g.points().iter().map(|x| x.sqrt()).collect();
        let fit = SplineFit::fit(Arc::clone(&b), &g, &y).unwrap();
        let m = basis_matrix(&b, &g).unwrap();
        assert_eq!(evaluate(&fit, &g).unwrap(), m.mul_vec(fit.coefficients()));
    }

    #[test]
    fn coefficient_length_checked() {
        let g = unit_grid(31);
        let b = Arc::new(build_basis(&g, 7, 3).unwrap());
        assert!(SplineFit::new(b, vec![0.0; 3]).is_err());
    }

    proptest! {
        #[test]
        fn partition_of_unity(df in 4usize..30, t in 0.0f64..=1.0) {
            let b = build_basis(&unit_grid(60), df, 3).unwrap();
            let row = b.design(&[t]).unwrap();
            let s: f64 = row.row(0).iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-10);
        }

        #[test]
        fn cubic_polynomials_reproduced(
            df in 4usize..20,
            a in -3.0f64..3.0, b1 in -3.0f64..3.0, c in -3.0f64..3.0, d in -3.0f64..3.0,
        ) {
            let g = TimeGrid::uniform(-1.0, 2.0, 61).unwrap();
            let basis = Arc::new(build_basis(&g, df, 3).unwrap());
            let y: Vec<f64> = g.points().iter().map(|x| a + b1 * x + c * x * x + d * x * x * x).collect();
            let fit = SplineFit::fit(basis, &g, &y).unwrap();
            for (v, e) in fit.evaluate(&g).unwrap().iter().zip(&y) {
                prop_assert!((v - e).abs() < 1e-8);
            }
        }

        #[test]
        fn refitting_a_fit_is_idempotent(df in 4usize..16, seed in 0u64..1000) {
            let g = unit_grid(41);
            let basis = Arc::new(build_basis(&g, df, 3).unwrap());
            let mut rng = crate::rng::RngStream::new(seed);
            let y: Vec<f64> = (0..41).map(|_| rng.standard_normal()).collect();
            let first = SplineFit::fit(Arc::clone(&basis), &g, &y).unwrap();
            let smooth = first.evaluate(&g).unwrap();
            let second = SplineFit::fit(basis, &g, &smooth).unwrap();
            for (a, b) in first.coefficients().iter().zip(second.coefficients()) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }
    }
}
