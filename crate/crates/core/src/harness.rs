//! Benchmark harness: every `(algorithm, k, run)` cell is one seeded solve,
//! written as its own trace file, then aggregated into a summary table.
//!
//! Output directory layout:
//!
//! ```text
//! trace_<algo>_k<k>_run<r>_seed<seed>.csv   one per cell
//! curve_<algo>_k<k>.csv                     mean best fitness per iteration
//! summary.csv                               per (algorithm, k) statistics
//! failures.csv                              only when some cell failed
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::load_edge_list;
use crate::instance::Instance;
use crate::solver::{read_trace_csv, solve, write_trace_csv, Algorithm, SolverConfig, TraceRecord};

pub const SUMMARY_FILE: &str = "summary.csv";
pub const FAILURES_FILE: &str = "failures.csv";
const SUMMARY_NOTE: &str = "# std is the population standard deviation of final best fitness";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub graph: PathBuf,
    pub ks: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub runs: usize,
    pub base_seed: u64,
    pub output_dir: PathBuf,
    pub workers: usize,
    pub largest_component: bool,
    /// Algorithm, k and seed are overwritten per cell.
    pub template: SolverConfig,
}

impl ExperimentPlan {
    pub fn new(graph: impl Into<PathBuf>, output_dir: impl Into<PathBuf>) -> Self {
        ExperimentPlan {
            graph: graph.into(),
            ks: vec![3, 4, 5],
            algorithms: Algorithm::ALL.to_vec(),
            runs: 5,
            base_seed: 0,
            output_dir: output_dir.into(),
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            largest_component: true,
            template: SolverConfig::new(Algorithm::Hybrid, 3, 0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::config("runs per configuration must be at least 1"));
        }
        if self.ks.is_empty() || self.ks.iter().any(|&k| k < 2) {
            return Err(Error::config("committee sizes must be non-empty and at least 2"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::config("at least one algorithm is required"));
        }
        if self.workers == 0 {
            return Err(Error::config("worker count must be at least 1"));
        }
        Ok(())
    }

    /// Cells in plan order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &algorithm in &self.algorithms {
            for &k in &self.ks {
                for run in 0..self.runs {
                    cells.push(Cell {
                        algorithm,
                        k,
                        run,
                        seed: cell_seed(self.base_seed, algorithm, k, run),
                    });
                }
            }
        }
        cells
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub algorithm: Algorithm,
    pub k: usize,
    pub run: usize,
    pub seed: u64,
}

impl Cell {
    pub fn trace_file_name(&self) -> String {
        format!(
            "trace_{}_k{}_run{}_seed{}.csv",
            self.algorithm, self.k, self.run, self.seed
        )
    }

    pub fn parse_trace_file_name(name: &str) -> Option<Cell> {
        let stem = name.strip_prefix("trace_")?.strip_suffix(".csv")?;
        let mut parts = stem.split('_');
        let algorithm = parts.next()?.parse().ok()?;
        let k = parts.next()?.strip_prefix('k')?.parse().ok()?;
        let run = parts.next()?.strip_prefix("run")?.parse().ok()?;
        let seed = parts.next()?.strip_prefix("seed")?.parse().ok()?;
        parts.next().is_none().then_some(Cell {
            algorithm,
            k,
            run,
            seed,
        })
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of a cell; depends only on its coordinates, never on plan order.
pub fn cell_seed(base_seed: u64, algorithm: Algorithm, k: usize, run: usize) -> u64 {
    let algo = Algorithm::ALL.iter().position(|&a| a == algorithm).unwrap_or(0) as u64;
    [algo, k as u64, run as u64]
        .into_iter()
        .fold(splitmix64(base_seed), |acc, part| splitmix64(acc ^ part))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub algorithm: Algorithm,
    pub k: usize,
    pub run: usize,
    pub seed: u64,
    /// Identifies the graph the run was made on.
    pub graph: String,
    pub records: Vec<TraceRecord>,
}

impl RunTrace {
    pub fn final_fitness(&self) -> Option<f64> {
        self.records.last().map(|r| r.best_fitness)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub algorithm: Algorithm,
    pub k: usize,
    pub runs: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    /// Pointwise mean of best fitness per iteration; shorter traces hold their
    /// final value.
    pub curve: Vec<f64>,
}

impl CellSummary {
    /// All traces must share algorithm and k.
    pub fn from_traces(traces: &[&RunTrace]) -> Result<Self> {
        let first = traces
            .first()
            .ok_or_else(|| Error::InconsistentTraces("no traces to summarize".into()))?;
        if let Some(t) = traces.iter().find(|t| t.k != first.k || t.algorithm != first.algorithm) {
            return Err(Error::InconsistentTraces(format!(
                "cannot mix {} k={} with {} k={}",
                first.algorithm, first.k, t.algorithm, t.k
            )));
        }
        let finals = traces
            .iter()
            .map(|t| {
                t.final_fitness()
                    .ok_or_else(|| Error::InconsistentTraces(format!("empty trace for run {}", t.run)))
            })
            .collect::<Result<Vec<f64>>>()?;
        let runs = finals.len();
        let mean = finals.iter().sum::<f64>() / runs as f64;
        let var = finals.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / runs as f64;
        let len = traces.iter().map(|t| t.records.len()).max().unwrap_or(0);
        let curve = (0..len)
            .map(|i| {
                let total: f64 = traces
                    .iter()
                    .map(|t| t.records.get(i).unwrap_or(t.records.last().unwrap()).best_fitness)
                    .sum();
                total / runs as f64
            })
            .collect();
        Ok(CellSummary {
            algorithm: first.algorithm,
            k: first.k,
            runs,
            mean,
            std: var.sqrt(),
            min: finals.iter().copied().fold(f64::INFINITY, f64::min),
            max: finals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            curve,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub cells: Vec<CellSummary>,
}

impl Summary {
    pub fn cell(&self, algorithm: Algorithm, k: usize) -> Option<&CellSummary> {
        self.cells.iter().find(|c| c.algorithm == algorithm && c.k == k)
    }

    /// `(hybrid mean - baseline mean) / baseline mean`.
    pub fn improvement(&self, k: usize, baseline: Algorithm) -> Option<f64> {
        let hybrid = self.cell(Algorithm::Hybrid, k)?;
        let base = self.cell(baseline, k)?;
        Some((hybrid.mean - base.mean) / base.mean)
    }

    /// Improvement over the baseline with the lowest mean at this k.
    pub fn improvement_over_worst(&self, k: usize) -> Option<f64> {
        let worst = self
            .cells
            .iter()
            .filter(|c| c.k == k && c.algorithm != Algorithm::Hybrid)
            .min_by(|a, b| a.mean.total_cmp(&b.mean))?;
        self.improvement(k, worst.algorithm)
    }

    pub fn to_csv(&self) -> Result<String> {
        let baselines = &Algorithm::ALL[1..];
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        let mut header: Vec<String> = ["algorithm", "k", "runs", "mean", "std", "min", "max"]
            .map(String::from)
            .to_vec();
        header.extend(baselines.iter().map(|b| format!("improvement_vs_{b}")));
        header.push("improvement_vs_worst".into());
        w.write_record(&header)?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for c in &self.cells {
            let mut row = vec![
                c.algorithm.to_string(),
                c.k.to_string(),
                c.runs.to_string(),
                c.mean.to_string(),
                c.std.to_string(),
                c.min.to_string(),
                c.max.to_string(),
            ];
            let hybrid = c.algorithm == Algorithm::Hybrid;
            for &b in baselines {
                row.push(opt(hybrid.then(|| self.improvement(c.k, b)).flatten()));
            }
            row.push(opt(hybrid.then(|| self.improvement_over_worst(c.k)).flatten()));
            w.write_record(&row)?;
        }
        let body = String::from_utf8(w.into_inner().map_err(|e| Error::Csv(e.into_error().into()))?)
            .expect("csv output is utf-8");
        Ok(format!("{SUMMARY_NOTE}\n{body}"))
    }

    pub fn curve_csv(cell: &CellSummary) -> String {
        let mut out = String::from("iteration,mean_best_fitness\n");
        for (i, v) in cell.curve.iter().enumerate() {
            out.push_str(&format!("{i},{v}\n"));
        }
        out
    }
}

/// Groups traces by `(algorithm, k)` and summarizes each group.
pub fn summarize(traces: &[RunTrace]) -> Result<Summary> {
    let first = traces
        .first()
        .ok_or_else(|| Error::InconsistentTraces("no traces to summarize".into()))?;
    if let Some(t) = traces.iter().find(|t| t.graph != first.graph) {
        return Err(Error::InconsistentTraces(format!(
            "traces come from different graphs ({} and {})",
            first.graph, t.graph
        )));
    }
    let mut groups: BTreeMap<(Algorithm, usize), Vec<&RunTrace>> = BTreeMap::new();
    for t in traces {
        groups.entry((t.algorithm, t.k)).or_default().push(t);
    }
    let cells = groups
        .values_mut()
        .map(|group| {
            group.sort_by_key(|t| t.run);
            CellSummary::from_traces(group)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Summary { cells })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellFailure {
    pub cell: Cell,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct PlanOutcome {
    pub summary: Option<Summary>,
    pub traces: Vec<RunTrace>,
    pub failures: Vec<CellFailure>,
}

pub fn graph_label(instance: &Instance) -> String {
    let g = instance.graph();
    format!("nodes={},edges={}", g.node_count(), g.edge_count())
}

/// Loads the plan's graph and runs it.
pub fn run_plan(plan: &ExperimentPlan) -> Result<PlanOutcome> {
    plan.validate()?;
    let instance = Instance::new(load_edge_list(&plan.graph, plan.largest_component)?)?;
    run_plan_on(&instance, plan)
}

pub fn run_plan_on(instance: &Instance, plan: &ExperimentPlan) -> Result<PlanOutcome> {
    plan.validate()?;
    fs::create_dir_all(&plan.output_dir).map_err(|e| Error::io(&plan.output_dir, e))?;
    let label = graph_label(instance);
    let cells = plan.cells();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.workers)
        .build()
        .map_err(|e| Error::config(e.to_string()))?;
    let results: Vec<std::result::Result<RunTrace, CellFailure>> = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| {
                run_cell(instance, plan, cell, &label).map_err(|e| CellFailure {
                    cell: *cell,
                    message: e.to_string(),
                })
            })
            .collect()
    });

    let mut traces = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(t) => traces.push(t),
            Err(f) => failures.push(f),
        }
    }
    let summary = if traces.is_empty() {
        None
    } else {
        let summary = summarize(&traces)?;
        write_file(&plan.output_dir.join(SUMMARY_FILE), &summary.to_csv()?)?;
        for cell in &summary.cells {
            let name = format!("curve_{}_k{}.csv", cell.algorithm, cell.k);
            write_file(&plan.output_dir.join(name), &Summary::curve_csv(cell))?;
        }
        Some(summary)
    };
    if !failures.is_empty() {
        let mut text = String::from("algorithm,k,run,seed,error\n");
        for f in &failures {
            let msg = f.message.replace(['\n', ','], " ");
            text.push_str(&format!(
                "{},{},{},{},{msg}\n",
                f.cell.algorithm, f.cell.k, f.cell.run, f.cell.seed
            ));
        }
        write_file(&plan.output_dir.join(FAILURES_FILE), &text)?;
    }
    Ok(PlanOutcome {
        summary,
        traces,
        failures,
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn run_cell(instance: &Instance, plan: &ExperimentPlan, cell: &Cell, label: &str) -> Result<RunTrace> {
    let mut cfg = plan.template.clone();
    cfg.algorithm = cell.algorithm;
    cfg.k = cell.k;
    cfg.seed = cell.seed;
    let result = solve(instance, &cfg)?;
    let path = plan.output_dir.join(cell.trace_file_name());
    let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
    write_trace_csv(&result.trace, std::io::BufWriter::new(file))?;
    Ok(RunTrace {
        algorithm: cell.algorithm,
        k: cell.k,
        run: cell.run,
        seed: cell.seed,
        graph: label.to_string(),
        records: result.trace,
    })
}

/// Rebuilds the summary from the trace files in `dir` alone.
pub fn summarize_dir(dir: &Path) -> Result<Summary> {
    let mut traces = Vec::new();
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut names: Vec<String> = entries
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().into_string().ok())
        .collect();
    names.sort();
    for name in names {
        let Some(cell) = Cell::parse_trace_file_name(&name) else {
            continue;
        };
        let path = dir.join(&name);
        let file = fs::File::open(&path).map_err(|e| Error::io(&path, e))?;
        traces.push(RunTrace {
            algorithm: cell.algorithm,
            k: cell.k,
            run: cell.run,
            seed: cell.seed,
            graph: String::new(),
            records: read_trace_csv(std::io::BufReader::new(file))?,
        });
    }
    summarize(&traces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::path;

    fn trace(algorithm: Algorithm, k: usize, run: usize, finals: &[f64]) -> RunTrace {
        RunTrace {
            algorithm,
            k,
            run,
            seed: run as u64,
            graph: "g".into(),
            records: finals
                .iter()
                .enumerate()
                .map(|(i, &f)| TraceRecord::new(i as u64, f, i as u64, 0))
                .collect(),
        }
    }

    #[test]
    fn constant_finals() {
        let traces: Vec<_> = (0..5).map(|r| trace(Algorithm::Hybrid, 3, r, &[0.8])).collect();
        let s = summarize(&traces).unwrap();
        assert_eq!((s.cells[0].mean, s.cells[0].std), (0.8, 0.0));
    }

    #[test]
    fn population_std() {
        let traces = vec![
            trace(Algorithm::Ga, 3, 0, &[0.6]),
            trace(Algorithm::Ga, 3, 1, &[0.5, 1.0]),
        ];
        let s = summarize(&traces).unwrap();
        let c = &s.cells[0];
        assert!((c.mean - 0.8).abs() < 1e-12);
        assert!((c.std - 0.2).abs() < 1e-12);
        assert_eq!((c.min, c.max), (0.6, 1.0));
        // the shorter trace holds 0.6 at iteration 1
        assert_eq!(c.curve, vec![0.55, 0.8]);
    }

    #[test]
    fn improvement_against_worst() {
        let traces = vec![
            trace(Algorithm::Hybrid, 3, 0, &[0.96]),
            trace(Algorithm::Sa, 3, 0, &[0.79]),
            trace(Algorithm::Bpso, 3, 0, &[0.9]),
        ];
        let s = summarize(&traces).unwrap();
        let imp = s.improvement_over_worst(3).unwrap();
        assert!((imp - 0.17 / 0.79).abs() < 1e-12);
        assert!((imp - 0.215).abs() < 0.001);
        let csv = s.to_csv().unwrap();
        assert!(csv.starts_with(SUMMARY_NOTE));
    }

    #[test]
    fn mixed_inputs_rejected() {
        let a = trace(Algorithm::Hc, 3, 0, &[0.5]);
        let b = trace(Algorithm::Hc, 4, 1, &[0.5]);
        assert!(CellSummary::from_traces(&[&a, &b]).is_err());
        let mut c = trace(Algorithm::Hc, 3, 1, &[0.5]);
        c.graph = "other".into();
        assert!(summarize(&[a, c]).is_err());
        assert!(summarize(&[]).is_err());
    }

    #[test]
    fn file_names_round_trip() {
        let cell = Cell {
            algorithm: Algorithm::Hybrid,
            k: 4,
            run: 2,
            seed: 1234567,
        };
        assert_eq!(Cell::parse_trace_file_name(&cell.trace_file_name()), Some(cell));
        assert_eq!(Cell::parse_trace_file_name("summary.csv"), None);
    }

    #[test]
    fn seeds_depend_only_on_coordinates() {
        let mut plan = ExperimentPlan::new("g.txt", "out");
        let forward = plan.cells();
        plan.algorithms.reverse();
        plan.ks.reverse();
        for cell in plan.cells() {
            assert!(forward.contains(&cell));
        }
        let seeds: std::collections::HashSet<u64> = forward.iter().map(|c| c.seed).collect();
        assert_eq!(seeds.len(), forward.len());
    }

    #[test]
    fn path_plan_with_hill_climbing() {
        let dir = tempfile::tempdir().unwrap();
        let inst = Instance::new(path(4)).unwrap();
        let mut plan = ExperimentPlan::new("unused", dir.path());
        plan.ks = vec![2];
        plan.algorithms = vec![Algorithm::Hc];
        plan.runs = 1;
        plan.workers = 1;
        let out = run_plan_on(&inst, &plan).unwrap();
        let summary = out.summary.unwrap();
        assert_eq!(summary.cells[0].mean, 1.0);
        assert!(dir.path().join(SUMMARY_FILE).exists());
        assert_eq!(summarize_dir(dir.path()).unwrap().to_csv().unwrap(), summary.to_csv().unwrap());
    }

    #[test]
    fn failing_cells_are_isolated() {
        let dir = tempfile::tempdir().unwrap();
        let inst = Instance::new(path(4)).unwrap();
        let mut plan = ExperimentPlan::new("unused", dir.path());
        plan.ks = vec![2, 4];
        plan.algorithms = vec![Algorithm::Hc];
        plan.runs = 2;
        plan.workers = 1;
        let out = run_plan_on(&inst, &plan).unwrap();
        assert_eq!(out.traces.len(), 2);
        assert_eq!(out.failures.len(), 2);
        assert!(dir.path().join(FAILURES_FILE).exists());
    }
}
