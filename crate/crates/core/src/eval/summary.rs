use serde::{Deserialize, Serialize};

use crate::error::{FabrikError, Result};
use crate::pipeline::Method;

/// The five per-run measures in reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Correctness,
    Ari,
    Distortion,
    Iterations,
    WallTime,
}

impl Measure {
    pub const ALL: [Measure; 5] = [
        Measure::Correctness,
        Measure::Ari,
        Measure::Distortion,
        Measure::Iterations,
        Measure::WallTime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Correctness => "correctness",
            Measure::Ari => "ari",
            Measure::Distortion => "distortion",
            Measure::Iterations => "iterations",
            Measure::WallTime => "wall_time",
        }
    }
}

/// One method run on one replicate dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub replicate: usize,
    pub method: Method,
    pub correctness: f64,
    pub ari: f64,
    pub distortion: f64,
    pub iterations: usize,
    pub wall_time: f64,
}

impl RunRecord {
    pub fn value(&self, m: Measure) -> f64 {
        match m {
            Measure::Correctness => self.correctness,
            Measure::Ari => self.ari,
            Measure::Distortion => self.distortion,
            Measure::Iterations => self.iterations as f64,
            Measure::WallTime => self.wall_time,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureStats {
    pub median: f64,
    pub mean: f64,
    /// Sample standard deviation; 0 when `n == 1`.
    pub sd: f64,
    pub n: usize,
}

impl MeasureStats {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(FabrikError::EmptyInput);
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
        };
        let mean = values.iter().sum::<f64>() / n as f64;
        let sd = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Ok(MeasureStats { median, mean, sd, n })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    /// Indexed like [`Measure::ALL`].
    pub stats: [MeasureStats; 5],
}

impl MethodSummary {
    pub fn get(&self, m: Measure) -> &MeasureStats {
        &self.stats[Measure::ALL.iter().position(|x| *x == m).unwrap()]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSummary {
    pub methods: Vec<MethodSummary>,
}

impl BenchmarkSummary {
    pub fn method(&self, m: Method) -> Option<&MethodSummary> {
        self.methods.iter().find(|s| s.method == m)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,measure,median,mean,sd,n\n");
        for s in &self.methods {
            for (m, st) in Measure::ALL.iter().zip(&s.stats) {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    s.method,
                    m.name(),
                    st.median,
                    st.mean,
                    st.sd,
                    st.n
                ));
            }
        }
        out
    }

    /// Fixed-width table, one block of rows per method.
    pub fn to_pretty(&self) -> String {
        let mut out = format!(
            "{:<8} {:<12} {:>14} {:>14} {:>14}\n",
            "method", "measure", "median", "mean", "sd"
        );
        for s in &self.methods {
            for (m, st) in Measure::ALL.iter().zip(&s.stats) {
                out.push_str(&format!(
                    "{:<8} {:<12} {:>14.4} {:>14.4} {:>14.4}\n",
                    s.method.to_string(),
                    m.name(),
                    st.median,
                    st.mean,
                    st.sd
                ));
            }
        }
        out
    }
}

/// Per-method statistics, with methods in canonical table order.
pub fn summarize(records: &[RunRecord]) -> Result<BenchmarkSummary> {
    if records.is_empty() {
        return Err(FabrikError::EmptyInput);
    }
    let mut methods = Vec::new();
    for method in Method::ALL {
        let runs: Vec<&RunRecord> = records.iter().filter(|r| r.method == method).collect();
        if runs.is_empty() {
            continue;
        }
        let mut stats = [MeasureStats {
            median: 0.0,
            mean: 0.0,
            sd: 0.0,
            n: 0,
        }; 5];
        for (slot, m) in stats.iter_mut().zip(Measure::ALL) {
            let values: Vec<f64> = runs.iter().map(|r| r.value(m)).collect();
            *slot = MeasureStats::from_values(&values)?;
        }
        methods.push(MethodSummary { method, stats });
    }
    Ok(BenchmarkSummary { methods })
}
