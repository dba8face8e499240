use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{AlgorithmEntry, ExperimentConfig, FunctionEntry};
use super::seeds::RunSeeds;
use crate::error::{Error, Result};
use crate::lds::PointSet;
use crate::objectives::{lookup, ObjectiveSeeds, ObjectiveSpec, BOX_LOWER, BOX_UPPER};
use crate::stream::{build_stream_combined, build_stream_direct, build_stream_random, Construction, EpsilonStream};
use crate::swarm::{run_optimizer, OptimizerConfig, RunRecord, SearchSpace};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const TIMINGS_FILE: &str = "timings.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionRecord {
    pub id: String,
    pub label: String,
    pub dim: usize,
    pub z_star: f64,
    pub seeds: ObjectiveSeeds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunEntry {
    pub function: String,
    pub algorithm: String,
    pub run: usize,
    pub seeds: RunSeeds,
    pub status: RunStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_fitness: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve_file: Option<String>,
}

/// Everything needed to regenerate every curve. Wall times are kept out of
/// it (see `timings.csv`) so the manifest is itself deterministic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub artifact: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub functions: Vec<FunctionRecord>,
    pub runs: Vec<RunEntry>,
}

impl Manifest {
    pub fn failures(&self) -> impl Iterator<Item = &RunEntry> {
        self.runs.iter().filter(|r| r.status == RunStatus::Failed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultSet {
    pub root: PathBuf,
    pub manifest: Manifest,
    /// Keyed by (function label, algorithm id, run index).
    pub curves: BTreeMap<(String, String, usize), Vec<f64>>,
}

impl ResultSet {
    pub fn failure_count(&self) -> usize {
        self.manifest.failures().count()
    }
}

fn curve_path(function: &str, algorithm: &str, run: usize) -> String {
    format!("curves/{function}/{algorithm}/run_{run:03}.csv")
}

fn format_curve(curve: &[f64]) -> String {
    let mut out = String::with_capacity(curve.len() * 24);
    out.push_str("iteration,best_fitness\n");
    for (g, v) in curve.iter().enumerate() {
        let _ = writeln!(out, "{g},{v}");
    }
    out
}

fn parse_curve(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        message: format!("line {line}: {msg}"),
    };
    let mut curve = Vec::new();
    for (n, line) in text.lines().enumerate().skip(1) {
        let (g, v) = line
            .split_once(',')
            .ok_or_else(|| parse_err(n + 1, "expected iteration,best_fitness".into()))?;
        if g.trim().parse::<usize>().ok() != Some(curve.len()) {
            return Err(parse_err(n + 1, format!("iteration {g:?} out of sequence")));
        }
        curve.push(v.trim().parse::<f64>().map_err(|e| parse_err(n + 1, e.to_string()))?);
    }
    Ok(curve)
}

struct Cell<'a> {
    function: &'a FunctionEntry,
    objective: &'a ObjectiveSpec,
    algorithm: &'a AlgorithmEntry,
    external: Option<&'a PointSet>,
}

fn build_stream(config: &ExperimentConfig, cell: &Cell<'_>, seeds: RunSeeds) -> Result<EpsilonStream> {
    let (n, d, g) = (config.n_particles, cell.function.dim, config.horizon);
    let sampler = &cell.algorithm.sampler;
    let mode = cell.algorithm.mode();
    match sampler.construction {
        Construction::Random => Ok(build_stream_random(n, d, g, mode, seeds.stream)),
        Construction::DirectLds => {
            let generator = sampler
                .generator_with_seed(seeds.stream)
                .ok_or_else(|| Error::Config("direct construction needs a generator".into()))?;
            build_stream_direct(generator, n, d, g, mode)
        }
        Construction::CombinedLds => {
            let seed_set = match cell.external {
                Some(set) => set.clone(),
                None => sampler
                    .generator_with_seed(seeds.stream)
                    .ok_or_else(|| Error::Config("combined construction needs a generator".into()))?
                    .generate(n, d)?,
            };
            build_stream_combined(&seed_set, d, g, mode, seeds.permutation)
        }
    }
}

fn execute(config: &ExperimentConfig, cell: &Cell<'_>, seeds: RunSeeds) -> Result<RunRecord> {
    let stream = build_stream(config, cell, seeds)?;
    let space = SearchSpace::new(
        vec![BOX_LOWER; cell.function.dim],
        vec![BOX_UPPER; cell.function.dim],
        config.velocity_fraction,
    )?;
    let opt = OptimizerConfig {
        engine: cell.algorithm.settings(),
        horizon: config.horizon,
        space,
    };
    run_optimizer(&opt, cell.objective, &stream, seeds.aux)
}

fn build_objectives(config: &ExperimentConfig) -> Result<(Vec<ObjectiveSpec>, Vec<FunctionRecord>)> {
    let mut specs = Vec::new();
    let mut records = Vec::new();
    for f in &config.functions {
        let def = lookup(&f.id)?;
        let seeds = f.seeds(config.master_seed);
        specs.push(def.build(f.dim, seeds)?);
        records.push(FunctionRecord {
            id: f.id.clone(),
            label: f.label(),
            dim: f.dim,
            z_star: def.z_star,
            seeds,
        });
    }
    Ok((specs, records))
}

fn load_external(config: &ExperimentConfig) -> Result<Vec<Option<PointSet>>> {
    config.algorithms.iter().map(|a| a.sampler.load_seed_set()).collect()
}

/// Runs every (function, algorithm, run) work item, writes
/// `curves/<function>/<algorithm>/run_<r>.csv`, `manifest.json` and
/// `timings.csv` under `config.output_dir`.
///
/// Invalid configurations are errors. A failing run is recorded in the
/// manifest and the remaining runs continue.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ResultSet> {
    config.validate()?;
    let (objectives, records) = build_objectives(config)?;
    let externals = load_external(config)?;
    let root = config.output_dir.clone();

    let mut items = Vec::new();
    for (fi, f) in config.functions.iter().enumerate() {
        for (ai, a) in config.algorithms.iter().enumerate() {
            for r in 0..config.runs_per_cell {
                let dir = root.join(format!("curves/{}/{}", f.label(), a.id));
                if r == 0 {
                    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                }
                items.push((fi, ai, r));
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {} worker threads: {e}", config.jobs)))?;

    let outcomes: Vec<(RunEntry, Option<Vec<f64>>, f64)> = pool.install(|| {
        items
            .par_iter()
            .map(|&(fi, ai, r)| {
                let f = &config.functions[fi];
                let a = &config.algorithms[ai];
                let label = f.label();
                let seeds = RunSeeds::derive(config.master_seed, &label, &a.id, r);
                let cell = Cell {
                    function: f,
                    objective: &objectives[fi],
                    algorithm: a,
                    external: externals[ai].as_ref(),
                };
                let mut entry = RunEntry {
                    function: label.clone(),
                    algorithm: a.id.clone(),
                    run: r,
                    seeds,
                    status: RunStatus::Failed,
                    error: None,
                    evaluations: None,
                    final_fitness: None,
                    curve_file: None,
                };
                let outcome = execute(config, &cell, seeds).and_then(|record| {
                    let rel = curve_path(&label, &a.id, r);
                    let path = root.join(&rel);
                    fs::write(&path, format_curve(&record.curve)).map_err(|e| Error::io(&path, e))?;
                    Ok((record, rel))
                });
                match outcome {
                    Ok((record, rel)) => {
                        entry.status = RunStatus::Ok;
                        entry.evaluations = Some(record.evaluations);
                        entry.final_fitness = record.curve.last().copied();
                        entry.curve_file = Some(rel);
                        (entry, Some(record.curve), record.wall_time_secs)
                    }
                    Err(e) => {
                        entry.error = Some(e.to_string());
                        (entry, None, 0.0)
                    }
                }
            })
            .collect()
    });

    let mut runs = Vec::with_capacity(outcomes.len());
    let mut curves = BTreeMap::new();
    let mut timings = String::from("function,algorithm,run,wall_time_secs\n");
    for (entry, curve, secs) in outcomes {
        let _ = writeln!(timings, "{},{},{},{secs}", entry.function, entry.algorithm, entry.run);
        if let Some(curve) = curve {
            curves.insert((entry.function.clone(), entry.algorithm.clone(), entry.run), curve);
        }
        runs.push(entry);
    }
    let manifest = Manifest {
        artifact: "ldseds".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        functions: records,
        runs,
    };
    let manifest_path = root.join(MANIFEST_FILE);
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&manifest_path, json + "\n").map_err(|e| Error::io(&manifest_path, e))?;
    let timings_path = root.join(TIMINGS_FILE);
    fs::write(&timings_path, timings).map_err(|e| Error::io(&timings_path, e))?;

    Ok(ResultSet { root, manifest, curves })
}

/// Reads a results directory written by [`run_experiment`].
pub fn load_results(dir: impl AsRef<Path>) -> Result<ResultSet> {
    let root = dir.as_ref().to_path_buf();
    let path = root.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.clone(),
        message: e.to_string(),
    })?;
    let mut curves = BTreeMap::new();
    for run in &manifest.runs {
        if let Some(rel) = &run.curve_file {
            let curve = parse_curve(&root.join(rel))?;
            curves.insert((run.function.clone(), run.algorithm.clone(), run.run), curve);
        }
    }
    Ok(ResultSet { root, manifest, curves })
}

/// Re-executes one run from the manifest alone.
pub fn replay_run(manifest: &Manifest, function: &str, algorithm: &str, run: usize) -> Result<Vec<f64>> {
    let config = &manifest.config;
    let entry = manifest
        .runs
        .iter()
        .find(|r| r.function == function && r.algorithm == algorithm && r.run == run)
        .ok_or_else(|| Error::invalid(format!("no run {function}/{algorithm}/{run} in manifest")))?;
    let fi = manifest
        .functions
        .iter()
        .position(|f| f.label == function)
        .ok_or_else(|| Error::invalid(format!("function {function} missing from manifest")))?;
    let rec = &manifest.functions[fi];
    let f = &config.functions[fi];
    let a = config
        .algorithms
        .iter()
        .find(|a| a.id == algorithm)
        .ok_or_else(|| Error::invalid(format!("algorithm {algorithm} missing from manifest")))?;
    let objective = lookup(&rec.id)?.build(rec.dim, rec.seeds)?;
    let external = a.sampler.load_seed_set()?;
    let cell = Cell {
        function: f,
        objective: &objective,
        algorithm: a,
        external: external.as_ref(),
    };
    Ok(execute(config, &cell, entry.seeds)?.curve)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        let curve = vec![1e10, 0.1 + 0.2, 300.0, 299.99999999999994];
        fs::write(&path, format_curve(&curve)).unwrap();
        assert_eq!(parse_curve(&path).unwrap(), curve);
        fs::write(&path, "iteration,best_fitness\n1,2\n").unwrap();
        assert!(parse_curve(&path).is_err());
    }
}
