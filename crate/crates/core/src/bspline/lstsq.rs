//! Least squares by row-sequential Givens rotations.
//!
//! Rows are folded one at a time into an upper-triangular factor, the way
//! banded spline observation matrices are usually reduced. Exact zeros in a row
//! are skipped, so a B-spline design row with `degree + 1` nonzeros costs at
//! most `degree + 1` rotations.

use crate::error::{FabrikError, Result};
use crate::matrix::Matrix;

/// Relative threshold on `|R_jj| / max |R_ii|` below which a column is declared dependent.
const RANK_TOL: f64 = 1e-10;

/// Upper-triangular factor of a design matrix together with `Qᵀy`.
pub(crate) struct GivensQr {
    n: usize,
    r: Vec<f64>,
    qty: Vec<f64>,
    filled: Vec<bool>,
    /// One past the last column that can be nonzero in each row of `r`.
    extent: Vec<usize>,
}

impl GivensQr {
    pub(crate) fn new(n: usize) -> Self {
        GivensQr {
            n,
            r: vec![0.0; n * n],
            qty: vec![0.0; n],
            filled: vec![false; n],
            extent: vec![0; n],
        }
    }

    /// Folds one observation row in. Only the span between the first and last
    /// nonzero (widened by the rows of `r` it meets) is touched, so banded
    /// designs cost `O(bandwidth²)` per row.
    fn absorb(&mut self, row: &[f64], rhs: f64, work: &mut [f64]) {
        let Some(lo) = row.iter().position(|v| *v != 0.0) else {
            return;
        };
        let hi = row.iter().rposition(|v| *v != 0.0).unwrap() + 1;
        self.absorb_span(lo, &row[lo..hi], rhs, work);
    }

    /// As `absorb` for a row whose entries outside `lo..lo + values.len()` are zero.
    pub(crate) fn absorb_span(&mut self, lo: usize, values: &[f64], mut rhs: f64, work: &mut [f64]) {
        let n = self.n;
        let mut hi = lo + values.len();
        work[lo..hi].copy_from_slice(values);
        let mut j = lo;
        while j < hi {
            let wj = work[j];
            if wj == 0.0 {
                j += 1;
                continue;
            }
            let rrow = &mut self.r[j * n..(j + 1) * n];
            if !self.filled[j] {
                rrow[j..hi].copy_from_slice(&work[j..hi]);
                self.extent[j] = hi;
                self.qty[j] = rhs;
                self.filled[j] = true;
                return;
            }
            let e = self.extent[j];
            if e > hi {
                work[hi..e].fill(0.0);
                hi = e;
            }
            self.extent[j] = hi;
            let rjj = rrow[j];
            // plain sqrt: hypot's overflow guard costs more than the rest of the rotation
            let h = (rjj * rjj + wj * wj).sqrt();
            let c = rjj / h;
            let s = wj / h;
            rrow[j] = h;
            work[j] = 0.0;
            for k in j + 1..hi {
                let a = rrow[k];
                let b = work[k];
                rrow[k] = c * a + s * b;
                work[k] = c * b - s * a;
            }
            let a = self.qty[j];
            self.qty[j] = c * a + s * rhs;
            rhs = c * rhs - s * a;
            j += 1;
        }
    }

    pub(crate) fn solve(&self) -> Result<Vec<f64>> {
        let n = self.n;
        let max_diag = (0..n).map(|j| self.r[j * n + j].abs()).fold(0.0_f64, f64::max);
        for j in 0..n {
            if !self.filled[j] || self.r[j * n + j].abs() <= RANK_TOL * max_diag {
                return Err(FabrikError::SingularFit { column: j });
            }
        }
        let mut x = vec![0.0; n];
        for j in (0..n).rev() {
            let rrow = &self.r[j * n..(j + 1) * n];
            let mut acc = self.qty[j];
            for k in j + 1..self.extent[j] {
                acc -= rrow[k] * x[k];
            }
            x[j] = acc / rrow[j];
        }
        Ok(x)
    }
}

/// Minimizes `‖A·x − y‖²`.
pub fn least_squares(a: &Matrix, y: &[f64]) -> Result<Vec<f64>> {
    if a.nrows() != y.len() {
        return Err(FabrikError::InvalidInput(format!(
            "design has {} rows but response has {} entries",
            a.nrows(),
            y.len()
        )));
    }
    let n = a.ncols();
    if n == 0 {
        return Err(FabrikError::InvalidInput("design has no columns".into()));
    }
    let mut qr = GivensQr::new(n);
    let mut work = vec![0.0; n];
    for (row, &yi) in a.rows_iter().zip(y) {
        qr.absorb(row, yi, &mut work);
    }
    qr.solve()
}
