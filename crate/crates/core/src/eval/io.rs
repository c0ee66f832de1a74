//! Dataset files: a CSV of curves (header = grid times, optional trailing
//! `label` column, empty cells = missing) and a JSON manifest.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::models::{LabeledDataset, ModelId};
use crate::bspline::TimeGrid;
use crate::error::{FabrikError, Result};
use crate::mask::Mask;
use crate::matrix::Matrix;

impl From<csv::Error> for FabrikError {
    fn from(e: csv::Error) -> Self {
        FabrikError::Format(e.to_string())
    }
}

impl From<serde_json::Error> for FabrikError {
    fn from(e: serde_json::Error) -> Self {
        FabrikError::Format(e.to_string())
    }
}

pub fn write_csv<W: Write>(ds: &LabeledDataset, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let mut header: Vec<String> = ds.grid.points().iter().map(|t| t.to_string()).collect();
    if ds.truth.is_some() {
        header.push("label".into());
    }
    w.write_record(&header)?;
    for (i, row) in ds.data.rows_iter().enumerate() {
        let mut rec: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let observed = ds.mask.as_ref().is_none_or(|m| m.is_observed(i, j));
                if observed {
                    v.to_string()
                } else {
                    String::new()
                }
            })
            .collect();
        if let Some(t) = &ds.truth {
            rec.push(t[i].to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

fn parse_cell(s: &str, line: usize, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| FabrikError::Format(format!("line {line}: bad {what} '{s}'")))
}

/// Reads a dataset. A last header cell named `label` marks a label column;
/// it must then be filled on every row.
pub fn read_csv<R: Read>(input: R) -> Result<LabeledDataset> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = r.headers()?.clone();
    let has_label = header.iter().next_back().is_some_and(|h| h.trim() == "label");
    let d = header.len() - usize::from(has_label);
    let times = header
        .iter()
        .take(d)
        .map(|h| parse_cell(h, 1, "time"))
        .collect::<Result<Vec<f64>>>()?;
    let grid = TimeGrid::new(times)?;

    let mut values = Vec::new();
    let mut missing: Vec<Vec<usize>> = Vec::new();
    let mut labels = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        if rec.len() != header.len() {
            return Err(FabrikError::Format(format!(
                "line {line}: {} fields, expected {}",
                rec.len(),
                header.len()
            )));
        }
        let mut miss = Vec::new();
        for (j, cell) in rec.iter().take(d).enumerate() {
            if cell.trim().is_empty() {
                miss.push(j);
                values.push(f64::NAN);
            } else {
                values.push(parse_cell(cell, line, "value")?);
            }
        }
        missing.push(miss);
        if has_label {
            let cell = rec.get(d).unwrap_or("").trim();
            let l = cell
                .parse::<usize>()
                .map_err(|_| FabrikError::Format(format!("line {line}: bad label '{cell}'")))?;
            labels.push(l);
        }
    }
    let n = missing.len();
    if n == 0 {
        return Err(FabrikError::EmptyInput);
    }
    let mask = if missing.iter().any(|m| !m.is_empty()) {
        Some(Mask::from_missing(n, d, &missing)?)
    } else {
        None
    };
    Ok(LabeledDataset {
        data: Matrix::from_vec(n, d, values)?,
        truth: has_label.then_some(labels),
        grid,
        mask,
    })
}

pub fn save_csv(ds: &LabeledDataset, path: &Path) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_csv(ds, std::io::BufWriter::new(f))
}

pub fn load_csv(path: &Path) -> Result<LabeledDataset> {
    let f = std::fs::File::open(path)?;
    read_csv(std::io::BufReader::new(f))
}

/// Provenance of a simulated dataset file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub model: ModelId,
    pub sigma: f64,
    pub seed: u64,
    pub grid: Vec<f64>,
    pub p_missing: f64,
    pub replicate_index: usize,
    /// Missing column indices per row; absent when every cell is observed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<Vec<Vec<usize>>>,
}

impl Manifest {
    pub fn new(
        model: ModelId,
        sigma: f64,
        seed: u64,
        p_missing: f64,
        replicate_index: usize,
        ds: &LabeledDataset,
    ) -> Self {
        Manifest {
            model,
            sigma,
            seed,
            grid: ds.grid.points().to_vec(),
            p_missing,
            replicate_index,
            mask: ds
                .mask
                .as_ref()
                .map(|m| (0..m.nrows()).map(|i| m.missing_in_row(i)).collect()),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn mask(&self, cols: usize) -> Result<Option<Mask>> {
        self.mask
            .as_ref()
            .map(|m| Mask::from_missing(m.len(), cols, m))
            .transpose()
    }
}
