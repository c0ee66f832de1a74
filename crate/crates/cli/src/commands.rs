use std::fs;
use std::path::Path;

use fabrik::bench::{elbow_curve, knee, records_csv, replicate_dataset, run_benchmark, BenchConfig};
use fabrik::eval::{ari, correctness, load_csv, save_csv, summarize, LabeledDataset, Manifest};
use fabrik::pipeline::{run_method, Method, MethodSpec};
use fabrik::RngStream;
use serde_json::json;

use crate::svg;
use crate::{BenchArgs, CliError, ClusterArgs, ElbowArgs, Emit, SimulateArgs, SpecArgs};

type Result<T> = std::result::Result<T, CliError>;

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

fn load(path: &Path) -> Result<LabeledDataset> {
    load_csv(path).map_err(|e| match CliError::from(e) {
        CliError::Io(m) => CliError::Io(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn spec_for(method: Method, args: &SpecArgs, default_df: Option<usize>) -> Result<MethodSpec> {
    let df = match (args.df.or(default_df), method.uses_splines()) {
        (Some(df), _) => df,
        (None, false) => 0,
        (None, true) => return Err(CliError::Usage(format!("--df is required for {method}"))),
    };
    let spec = MethodSpec {
        b: args.b,
        m: args.m,
        ..MethodSpec::new(method, df)
    };
    spec.validate()?;
    Ok(spec)
}

pub fn simulate(a: &SimulateArgs) -> Result<()> {
    if a.replicates == 0 {
        return Err(CliError::Usage("--replicates must be at least 1".into()));
    }
    ensure_dir(&a.out)?;
    for r in 0..a.replicates {
        let ds = replicate_dataset(a.model, a.sigma, a.p_missing, a.seed, r)?;
        let stem = format!("{}_{r:04}", a.model);
        save_csv(&ds, &a.out.join(format!("{stem}.csv")))?;
        let manifest = Manifest::new(a.model, a.sigma, a.seed, a.p_missing, r, &ds);
        write(&a.out, &format!("{stem}.json"), &manifest.to_json()?)?;
    }
    eprintln!("wrote {} dataset(s) to {}", a.replicates, a.out.display());
    Ok(())
}

pub fn cluster(a: &ClusterArgs) -> Result<()> {
    let ds = load(&a.input)?;
    let spec = spec_for(a.method, &a.spec, None)?;
    let mut rng = RngStream::new(a.seed);
    let run = run_method(&ds.data, &ds.grid, ds.mask.as_ref(), a.k, &spec, &mut rng)?;
    let labels = &run.partition.labels;
    ensure_dir(&a.out)?;

    if a.emit.contains(&Emit::Csv) {
        let mut out = String::from("row,label\n");
        for (i, l) in labels.iter().enumerate() {
            out.push_str(&format!("{i},{l}\n"));
        }
        write(&a.out, "labels.csv", &out)?;
    }
    if a.emit.contains(&Emit::Json) {
        let mut report = json!({
            "input": a.input.display().to_string(),
            "method": spec.method.to_string(),
            "k": a.k,
            "df": spec.df,
            "m": spec.m,
            "B": spec.b,
            "degree": spec.degree,
            "seed": a.seed,
            "rows": ds.data.nrows(),
            "columns": ds.data.ncols(),
            "missing_cells": ds.mask.as_ref().map_or(0, |m| m.missing_count()),
            "iterations": run.partition.iterations,
            "distortion_original": run.distortion_original,
            "distortion_clustering_space": run.partition.distortion,
            "cluster_sizes": run.partition.cluster_sizes(),
            "wall_time": run.wall_time,
        });
        if let Some(truth) = &ds.truth {
            report["ari"] = json!(ari(labels, truth)?);
            report["correctness"] = json!(correctness(labels, truth)?);
        }
        write(
            &a.out,
            "report.json",
            &(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"),
        )?;
    }
    if a.emit.contains(&Emit::Svg) {
        write(&a.out, "clusters.svg", &svg::parallel_coordinates(&ds, labels, a.k))?;
    }
    println!(
        "{}: k={} iterations={} distortion={:.6} sizes={:?}",
        spec.method,
        a.k,
        run.partition.iterations,
        run.distortion_original,
        run.partition.cluster_sizes()
    );
    Ok(())
}

pub fn bench(a: &BenchArgs) -> Result<()> {
    if a.emit.contains(&Emit::Svg) {
        return Err(CliError::Usage("bench writes csv and json only".into()));
    }
    let methods: Vec<Method> = if a.method.is_empty() {
        Method::ALL.to_vec()
    } else {
        a.method.clone()
    };
    let default_df = Some(a.model.default_df());
    let mut cfg = BenchConfig::new(a.model, a.sigma, a.replicates, a.seed);
    cfg.p_missing = a.p_missing;
    cfg.jobs = a.jobs;
    cfg.methods = methods
        .iter()
        .map(|&m| spec_for(m, &a.spec, default_df))
        .collect::<Result<_>>()?;
    let records = run_benchmark(&cfg)?;
    let summary = summarize(&records)?;
    ensure_dir(&a.out)?;

    if a.emit.contains(&Emit::Csv) {
        write(&a.out, "records.csv", &records_csv(&records, false))?;
        let mut times = String::from("replicate,method,wall_time\n");
        for r in &records {
            times.push_str(&format!("{},{},{}\n", r.replicate, r.method, r.wall_time));
        }
        write(&a.out, "wall_time.csv", &times)?;
        write(&a.out, "summary.csv", &summary.to_csv())?;
        write(&a.out, "summary.txt", &summary.to_pretty())?;
    }
    if a.emit.contains(&Emit::Json) {
        let body =
            serde_json::to_string_pretty(&json!({ "config": cfg, "summary": summary })).expect("summary serializes");
        write(&a.out, "summary.json", &(body + "\n"))?;
    }
    print!("{}", summary.to_pretty());
    Ok(())
}

/// Parses `4..12`, `4,6,8` and mixtures such as `4..8,10`. Ranges are inclusive.
pub fn parse_df_list(s: &str) -> Result<Vec<usize>> {
    let bad = || CliError::Usage(format!("cannot read df values from '{s}'"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((lo, hi)) => {
                let lo: usize = lo.trim().parse().map_err(|_| bad())?;
                let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

fn elbow_data(a: &ElbowArgs) -> Result<(LabeledDataset, usize)> {
    match (&a.input, a.model) {
        (Some(path), _) => {
            let ds = load(path)?;
            let k =
                a.k.ok_or_else(|| CliError::Usage("--k is required with --input".into()))?;
            Ok((ds, k))
        }
        (None, Some(model)) => {
            let ds = replicate_dataset(model, a.sigma, a.p_missing, a.seed, 0)?;
            Ok((ds, a.k.unwrap_or(model.n_clusters())))
        }
        (None, None) => Err(CliError::Usage("one of --input or --model is required".into())),
    }
}

pub fn elbow(a: &ElbowArgs) -> Result<()> {
    let (ds, k) = elbow_data(a)?;
    let template = MethodSpec {
        b: a.b,
        m: a.m,
        ..MethodSpec::new(Method::Fabrik, 4)
    };
    let dfs = match &a.df {
        Some(s) => parse_df_list(s)?,
        None => (template.degree + 1..=ds.grid.len().min(50)).collect(),
    };
    let (curve, skipped) = elbow_curve(
        &ds.data,
        &ds.grid,
        ds.mask.as_ref(),
        k,
        &dfs,
        &template,
        a.replicates,
        a.seed,
    )?;
    for df in &skipped {
        eprintln!("warning: df = {df} is not supported by the data and was skipped");
    }
    if curve.is_empty() {
        return Err(CliError::Usage("no usable df value in the requested range".into()));
    }
    let suggestion = knee(&curve);
    ensure_dir(&a.out)?;

    let mut table = String::from("df,distortion\n");
    for p in &curve {
        table.push_str(&format!("{},{}\n", p.df, p.distortion));
    }
    if a.emit.contains(&Emit::Csv) {
        write(&a.out, "elbow.csv", &table)?;
    }
    if a.emit.contains(&Emit::Json) {
        let body = json!({ "k": k, "seed": a.seed, "points": curve, "skipped": skipped, "knee": suggestion });
        write(
            &a.out,
            "elbow.json",
            &(serde_json::to_string_pretty(&body).expect("curve serializes") + "\n"),
        )?;
    }
    if a.emit.contains(&Emit::Svg) {
        write(&a.out, "elbow.svg", &svg::elbow_plot(&curve, suggestion))?;
    }
    print!("{table}");
    match suggestion {
        Some(df) => println!("knee suggestion: df = {df}"),
        None => println!("knee suggestion: none (fewer than 3 points)"),
    }
    Ok(())
}
