//! Simulated models, quality measures, benchmark statistics and dataset files.

pub mod io;
pub mod metrics;
pub mod models;
pub mod summary;

pub use io::{load_csv, read_csv, save_csv, write_csv, Manifest};
pub use metrics::{ari, correctness, distortion, distortion_observed};
pub use models::{generate, inject_missing, missing_per_row, LabeledDataset, ModelId, ModelSpec};
pub use summary::{summarize, BenchmarkSummary, Measure, MeasureStats, MethodSummary, RunRecord};
