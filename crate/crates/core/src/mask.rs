use serde::{Deserialize, Serialize};

use crate::error::{FabrikError, Result};

/// Per-cell observation flags for an `N × d` dataset (`true` = observed).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mask {
    rows: usize,
    cols: usize,
    observed: Vec<bool>,
}

impl Mask {
    pub fn all_observed(rows: usize, cols: usize) -> Self {
        Mask {
            rows,
            cols,
            observed: vec![true; rows * cols],
        }
    }

    /// Mask with the listed cells of each row missing.
    pub fn from_missing(rows: usize, cols: usize, missing: &[Vec<usize>]) -> Result<Self> {
        if missing.len() != rows {
            return Err(FabrikError::InvalidMask(format!(
                "{} missing-index lists for {rows} rows",
                missing.len()
            )));
        }
        let mut m = Mask::all_observed(rows, cols);
        for (i, row) in missing.iter().enumerate() {
            for &j in row {
                if j >= cols {
                    return Err(FabrikError::InvalidMask(format!("row {i}: column {j} out of range")));
                }
                m.observed[i * cols + j] = false;
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_observed(&self, i: usize, j: usize) -> bool {
        self.observed[i * self.cols + j]
    }

    pub fn set_missing(&mut self, i: usize, j: usize) {
        self.observed[i * self.cols + j] = false;
    }

    pub fn row(&self, i: usize) -> &[bool] {
        &self.observed[i * self.cols..(i + 1) * self.cols]
    }

    /// Missing column indices of row `i`, ascending.
    pub fn missing_in_row(&self, i: usize) -> Vec<usize> {
        self.row(i)
            .iter()
            .enumerate()
            .filter(|(_, &o)| !o)
            .map(|(j, _)| j)
            .collect()
    }

    pub fn missing_count(&self) -> usize {
        self.observed.iter().filter(|o| !**o).count()
    }

    pub fn is_complete(&self) -> bool {
        self.observed.iter().all(|&o| o)
    }
}
