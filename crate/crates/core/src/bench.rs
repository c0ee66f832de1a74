//! Replicated benchmarks over the simulated models, and the distortion-vs-df sweep.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bspline::TimeGrid;
use crate::error::{FabrikError, Result};
use crate::eval::metrics::{ari, correctness};
use crate::eval::models::{generate, inject_missing, LabeledDataset, ModelId, ModelSpec};
use crate::eval::summary::RunRecord;
use crate::mask::Mask;
use crate::matrix::Matrix;
use crate::pipeline::{run_method, Method, MethodSpec};
use crate::rng::RngStream;

/// Offset of the per-method streams among a replicate's child streams
/// (0 and 1 are taken by the data and the missingness draws).
const METHOD_STREAM_BASE: u64 = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub model: ModelId,
    pub sigma: f64,
    pub p_missing: f64,
    pub replicates: usize,
    pub seed: u64,
    pub methods: Vec<MethodSpec>,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
}

impl BenchConfig {
    /// All methods in table order with the model's default df.
    pub fn new(model: ModelId, sigma: f64, replicates: usize, seed: u64) -> Self {
        let df = model.default_df();
        BenchConfig {
            model,
            sigma,
            p_missing: 0.0,
            replicates,
            seed,
            methods: Method::ALL.iter().map(|&m| MethodSpec::new(m, df)).collect(),
            jobs: 0,
        }
    }

    pub fn with_methods(mut self, methods: &[Method]) -> Self {
        let df = self.model.default_df();
        self.methods = methods.iter().map(|&m| MethodSpec::new(m, df)).collect();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(FabrikError::InvalidParameter("replicates must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(FabrikError::InvalidSpec("no methods selected".into()));
        }
        if !(0.0..1.0).contains(&self.p_missing) {
            return Err(FabrikError::InvalidProportion(self.p_missing));
        }
        self.methods.iter().try_for_each(MethodSpec::validate)
    }
}

/// The dataset of replicate `r`, a pure function of `(model, sigma, p, seed, r)`.
pub fn replicate_dataset(model: ModelId, sigma: f64, p_missing: f64, seed: u64, r: usize) -> Result<LabeledDataset> {
    let stream = RngStream::new(seed).child(r as u64);
    let ds = generate(&ModelSpec::new(model, sigma), &mut stream.child(0))?;
    if p_missing > 0.0 {
        inject_missing(&ds, p_missing, &mut stream.child(1))
    } else {
        Ok(ds)
    }
}

/// Random stream of `method` on replicate `r`.
pub fn method_stream(seed: u64, r: usize, method: Method) -> RngStream {
    RngStream::new(seed)
        .child(r as u64)
        .child(METHOD_STREAM_BASE + method.code())
}

fn run_replicate(cfg: &BenchConfig, r: usize) -> Result<Vec<RunRecord>> {
    let ds = replicate_dataset(cfg.model, cfg.sigma, cfg.p_missing, cfg.seed, r)?;
    let truth = ds.truth.as_ref().expect("simulated data is labelled");
    let k = cfg.model.n_clusters();
    cfg.methods
        .iter()
        .map(|spec| {
            let mut rng = method_stream(cfg.seed, r, spec.method);
            let run = run_method(&ds.data, &ds.grid, ds.mask.as_ref(), k, spec, &mut rng)?;
            Ok(RunRecord {
                replicate: r,
                method: spec.method,
                correctness: correctness(&run.partition.labels, truth)?,
                ari: ari(&run.partition.labels, truth)?,
                distortion: run.distortion_original,
                iterations: run.partition.iterations,
                wall_time: run.wall_time,
            })
        })
        .collect()
}

/// Runs every method on every replicate. Records come back ordered by
/// replicate, then by the configured method order, whatever the thread count.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| FabrikError::InvalidParameter(e.to_string()))?;
    let per_rep: Vec<Result<Vec<RunRecord>>> = pool.install(|| {
        (0..cfg.replicates)
            .into_par_iter()
            .map(|r| run_replicate(cfg, r))
            .collect()
    });
    let mut out = Vec::with_capacity(cfg.replicates * cfg.methods.len());
    for rep in per_rep {
        out.extend(rep?);
    }
    Ok(out)
}

/// Per-run records as CSV. Wall time is machine dependent, so it can be left
/// out to get byte-reproducible output.
pub fn records_csv(records: &[RunRecord], with_wall_time: bool) -> String {
    let mut out = String::from("replicate,method,correctness,ari,distortion,iterations");
    out.push_str(if with_wall_time { ",wall_time\n" } else { "\n" });
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{}",
            r.replicate, r.method, r.correctness, r.ari, r.distortion, r.iterations
        ));
        if with_wall_time {
            out.push_str(&format!(",{}", r.wall_time));
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElbowPoint {
    pub df: usize,
    /// Mean distortion over the repeats.
    pub distortion: f64,
}

/// FABRIk distortion (in the input space) for each df, averaged over
/// `repeats` independent seedings. Values of df the grid cannot support are skipped.
#[allow(clippy::too_many_arguments)]
pub fn elbow_curve(
    data: &Matrix,
    grid: &TimeGrid,
    mask: Option<&Mask>,
    k: usize,
    dfs: &[usize],
    template: &MethodSpec,
    repeats: usize,
    seed: u64,
) -> Result<(Vec<ElbowPoint>, Vec<usize>)> {
    if repeats == 0 {
        return Err(FabrikError::InvalidParameter("repeats must be at least 1".into()));
    }
    let min_obs = (0..data.nrows())
        .map(|i| mask.map_or(grid.len(), |m| m.row(i).iter().filter(|&&o| o).count()))
        .min()
        .unwrap_or(0);
    let mut dfs: Vec<usize> = dfs.to_vec();
    dfs.sort_unstable();
    dfs.dedup();
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    let root = RngStream::new(seed);
    for df in dfs {
        if df < template.degree + 1 || df + 1 > min_obs {
            skipped.push(df);
            continue;
        }
        let spec = MethodSpec { df, ..template.clone() };
        let mut total = 0.0;
        for rep in 0..repeats {
            let run = run_method(data, grid, mask, k, &spec, &mut root.child(rep as u64))?;
            total += run.distortion_original;
        }
        points.push(ElbowPoint {
            df,
            distortion: total / repeats as f64,
        });
    }
    Ok((points, skipped))
}

/// Elbow suggestion: the interior point with the largest second difference.
pub fn knee(curve: &[ElbowPoint]) -> Option<usize> {
    curve
        .windows(3)
        .map(|w| (w[1].df, w[0].distortion - 2.0 * w[1].distortion + w[2].distortion))
        .fold(None, |best: Option<(usize, f64)>, (df, v)| match best {
            Some((_, b)) if b >= v => best,
            _ => Some((df, v)),
        })
        .map(|(df, _)| df)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> BenchConfig {
        BenchConfig::new(ModelId::M4, 1.0, 3, 7).with_methods(&[Method::Km, Method::Brik, Method::Fabrik])
    }

    #[test]
    fn records_are_ordered_and_reproducible() {
        let mut cfg = small_config();
        cfg.jobs = 1;
        let a = run_benchmark(&cfg).unwrap();
        cfg.jobs = 3;
        let b = run_benchmark(&cfg).unwrap();
        assert_eq!(a.len(), 9);
        let order: Vec<(usize, Method)> = a.iter().map(|r| (r.replicate, r.method)).collect();
        assert_eq!(order[..3], [(0, Method::Km), (0, Method::Brik), (0, Method::Fabrik)]);
        assert_eq!(order[8], (2, Method::Fabrik));
        assert_eq!(records_csv(&a, false), records_csv(&b, false));
    }

    #[test]
    fn method_results_do_not_depend_on_method_list() {
        let full = run_benchmark(&small_config()).unwrap();
        let only = run_benchmark(&small_config().with_methods(&[Method::Fabrik])).unwrap();
        let from_full: Vec<&RunRecord> = full.iter().filter(|r| r.method == Method::Fabrik).collect();
        for (a, b) in from_full.iter().zip(&only) {
            assert_eq!((a.ari, a.distortion, a.iterations), (b.ari, b.distortion, b.iterations));
        }
    }

    #[test]
    fn replicate_datasets_differ_and_repeat() {
        let a = replicate_dataset(ModelId::M1, 1.0, 0.1, 3, 0).unwrap();
        let b = replicate_dataset(ModelId::M1, 1.0, 0.1, 3, 1).unwrap();
        let a2 = replicate_dataset(ModelId::M1, 1.0, 0.1, 3, 0).unwrap();
        assert_ne!(a.mask, b.mask);
        assert_eq!(a.mask, a2.mask);
        assert_eq!(a.data.get(0, 0).to_bits(), a2.data.get(0, 0).to_bits());
    }

    #[test]
    fn csv_columns() {
        let recs = run_benchmark(&small_config()).unwrap();
        let with = records_csv(&recs, true);
        let without = records_csv(&recs, false);
        assert_eq!(with.lines().count(), 10);
        assert!(with.starts_with("replicate,method,correctness,ari,distortion,iterations,wall_time\n"));
        assert!(without.lines().all(|l| l.split(',').count() == 6));
        assert!(without.lines().nth(1).unwrap().starts_with("0,KM,"));
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = small_config();
        cfg.replicates = 0;
        assert!(run_benchmark(&cfg).is_err());
        let mut cfg = small_config();
        cfg.p_missing = 1.0;
        assert!(run_benchmark(&cfg).is_err());
    }

    #[test]
    fn knee_picks_sharpest_bend() {
        let pts = |v: &[f64]| -> Vec<ElbowPoint> {
            v.iter()
                .enumerate()
                .map(|(i, &d)| ElbowPoint {
                    df: 4 + i,
                    distortion: d,
                })
                .collect()
        };
        assert_eq!(knee(&pts(&[100.0, 40.0, 35.0, 33.0, 32.0])), Some(5));
        assert_eq!(knee(&pts(&[100.0, 90.0, 80.0, 20.0, 19.0])), Some(7));
        assert_eq!(knee(&pts(&[1.0, 2.0])), None);
    }

    #[test]
    fn elbow_sweep_skips_unsupported_df() {
        let ds = replicate_dataset(ModelId::M4, 1.0, 0.0, 1, 0).unwrap();
        let template = MethodSpec::new(Method::Fabrik, 4);
        let (curve, skipped) = elbow_curve(&ds.data, &ds.grid, None, 4, &[3, 4, 6, 5, 30], &template, 1, 2).unwrap();
        assert_eq!(curve.iter().map(|p| p.df).collect::<Vec<_>>(), vec![4, 5, 6]);
        assert_eq!(skipped, vec![3, 30]);
        let (single, _) = elbow_curve(&ds.data, &ds.grid, None, 4, &[5], &template, 1, 2).unwrap();
        assert_eq!(single.len(), 1);
    }
}
