use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use geocommittee::harness::{run_plan, ExperimentPlan};
use geocommittee::solver::write_trace_csv;
use geocommittee::{
    centralities, degree_histogram, global_metrics, load_edge_list, solve, Algorithm, Graph, Instance,
    SolverConfig, Topology,
};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "geocommittee", version, about = "Pick committees whose members are far apart in a social graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Network statistics, optionally with centralities of given nodes.
    Metrics {
        graph: PathBuf,
        #[arg(long)]
        largest_component: bool,
        /// Original node ids whose degree, betweenness and closeness to report.
        #[arg(long, value_delimiter = ',')]
        committee: Vec<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one solver and write the result document.
    Solve {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = AlgoArg::Hybrid)]
        algo: AlgoArg,
        /// Random seed; one is generated and printed when omitted.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        largest_component: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the per-iteration trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        params: SolverArgs,
    },
    /// Run every (algorithm, k, run) cell of an experiment plan.
    Bench {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "3,4,5")]
        ks: Vec<usize>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "hybrid,bpso,ga,sa,hc")]
        algos: Vec<AlgoArg>,
        #[arg(long, default_value_t = 5)]
        runs: usize,
        /// Base seed; one is generated and printed when omitted.
        #[arg(long)]
        base_seed: Option<u64>,
        #[arg(long)]
        out_dir: PathBuf,
        /// Parallel cells (defaults to the available parallelism).
        #[arg(long)]
        workers: Option<usize>,
        /// Use the whole graph instead of its largest connected component.
        #[arg(long)]
        whole_graph: bool,
        #[command(flatten)]
        params: SolverArgs,
    },
    /// Degree distribution as `degree,count` CSV.
    DegreeHist {
        graph: PathBuf,
        #[arg(long)]
        largest_component: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Hybrid,
    Bpso,
    Ga,
    Sa,
    Hc,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Hybrid => Algorithm::Hybrid,
            AlgoArg::Bpso => Algorithm::Bpso,
            AlgoArg::Ga => Algorithm::Ga,
            AlgoArg::Sa => Algorithm::Sa,
            AlgoArg::Hc => Algorithm::Hc,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum TopologyArg {
    Global,
    Ring,
}

#[derive(Args, Debug)]
struct SolverArgs {
    /// Swarm generations (GA generations for `ga`).
    #[arg(long, default_value_t = 500)]
    iters: u64,
    #[arg(long, default_value_t = 30)]
    population: usize,
    /// Inertia coefficient.
    #[arg(long, default_value_t = 2.0)]
    w: f64,
    /// Personal learning coefficient.
    #[arg(long, default_value_t = 2.0)]
    c1: f64,
    /// Collective learning coefficient.
    #[arg(long, default_value_t = 2.0)]
    c2: f64,
    #[arg(long, default_value_t = 6.0)]
    v_max: f64,
    #[arg(long, value_enum, default_value_t = TopologyArg::Global)]
    topology: TopologyArg,
    /// Maximum iterations of standalone hill climbing.
    #[arg(long, default_value_t = 3000)]
    hc_iters: u64,
    #[arg(long, default_value_t = 1000.0)]
    t_max: f64,
    #[arg(long, default_value_t = 1.0)]
    t_min: f64,
    /// Geometric cooling rate.
    #[arg(long, default_value_t = 0.99)]
    beta: f64,
    /// Proposals per temperature.
    #[arg(long, default_value_t = 1)]
    sa_inner: u64,
    /// Bandit exploration scale C.
    #[arg(long, default_value_t = 0.01)]
    mab_c: f64,
    /// Evaluations per local search call inside the hybrid (0 disables it).
    #[arg(long, default_value_t = 100)]
    ls_budget: u64,
    #[arg(long, default_value_t = 50)]
    ga_population: usize,
    #[arg(long, default_value_t = 2)]
    ga_tournament: usize,
    #[arg(long, default_value_t = 0.1)]
    ga_mutation: f64,
    #[arg(long, default_value_t = 1)]
    ga_elitism: usize,
    /// Record wall-clock times (makes outputs non-reproducible byte-for-byte).
    #[arg(long)]
    timing: bool,
}

impl SolverArgs {
    fn config(&self, algorithm: Algorithm, k: usize, seed: u64) -> SolverConfig {
        let mut cfg = SolverConfig::new(algorithm, k, seed);
        cfg.swarm.max_iterations = self.iters;
        cfg.swarm.population = self.population;
        cfg.swarm.w = self.w;
        cfg.swarm.c1 = self.c1;
        cfg.swarm.c2 = self.c2;
        cfg.swarm.v_max = self.v_max;
        cfg.swarm.topology = match self.topology {
            TopologyArg::Global => Topology::GlobalBest,
            TopologyArg::Ring => Topology::RingLocalBest,
        };
        cfg.hill_climb.max_iterations = self.hc_iters;
        cfg.anneal.t_max = self.t_max;
        cfg.anneal.t_min = self.t_min;
        cfg.anneal.beta = self.beta;
        cfg.anneal.inner_loops = self.sa_inner;
        cfg.bandit_scale = self.mab_c;
        cfg.local_search_budget = self.ls_budget;
        cfg.ga.population = self.ga_population;
        cfg.ga.tournament_size = self.ga_tournament;
        cfg.ga.mutation_rate = self.ga_mutation;
        cfg.ga.elitism = self.ga_elitism;
        cfg.record_timing = self.timing;
        cfg
    }
}

/// Bad invocation: exit code 1.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Usage>() => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn synthesize_seed(label: &str) -> u64 {
    let seed = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_nanos() as u64);
    eprintln!("{label}: {seed}");
    seed
}

fn load(path: &Path, largest_component: bool) -> anyhow::Result<Graph> {
    load_edge_list(path, largest_component).with_context(|| format!("loading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Metrics {
            graph,
            largest_component,
            committee,
            out,
        } => {
            let g = load(&graph, largest_component)?;
            let metrics = global_metrics(&g)?;
            let mut doc = serde_json::to_value(&metrics)?;
            if !committee.is_empty() {
                let nodes = committee
                    .iter()
                    .map(|&id| {
                        g.node_for_original(id)
                            .ok_or_else(|| anyhow!("node {id} is not in the graph"))
                    })
                    .collect::<anyhow::Result<Vec<_>>>()?;
                let rows = centralities(&g, &nodes)?;
                doc["centralities"] = serde_json::to_value(rows)?;
            }
            emit(out.as_deref(), &(serde_json::to_string_pretty(&doc)? + "\n"))
        }
        Command::Solve {
            graph,
            k,
            algo,
            seed,
            largest_component,
            out,
            trace,
            params,
        } => {
            if k < 2 {
                return Err(usage("--k must be at least 2 (a committee needs k >= 2 members)"));
            }
            let seed = seed.unwrap_or_else(|| synthesize_seed("seed"));
            let cfg = params.config(algo.into(), k, seed);
            let instance = Instance::new(load(&graph, largest_component)?)?;
            cfg.validate(instance.node_count()).map_err(|e| usage(e.to_string()))?;
            let result = solve(&instance, &cfg)?;
            if let Some(path) = trace {
                let file = fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?;
                write_trace_csv(&result.trace, std::io::BufWriter::new(file))?;
            }
            emit(out.as_deref(), &result.to_json()?)
        }
        Command::Bench {
            graph,
            ks,
            algos,
            runs,
            base_seed,
            out_dir,
            workers,
            whole_graph,
            params,
        } => {
            if ks.iter().any(|&k| k < 2) {
                return Err(usage("every committee size must be at least 2"));
            }
            let mut plan = ExperimentPlan::new(graph, out_dir);
            plan.ks = ks;
            plan.algorithms = algos.into_iter().map(Algorithm::from).collect();
            plan.runs = runs;
            plan.base_seed = base_seed.unwrap_or_else(|| synthesize_seed("base seed"));
            if let Some(w) = workers {
                plan.workers = w;
            }
            plan.largest_component = !whole_graph;
            plan.template = params.config(Algorithm::Hybrid, plan.ks[0], 0);
            plan.validate().map_err(|e| usage(e.to_string()))?;
            let outcome = run_plan(&plan)?;
            for f in &outcome.failures {
                eprintln!(
                    "cell {} k={} run={} failed: {}",
                    f.cell.algorithm, f.cell.k, f.cell.run, f.message
                );
            }
            let summary = outcome
                .summary
                .ok_or_else(|| anyhow!("every cell of the plan failed"))?;
            let mut stdout = std::io::stdout();
            stdout.write_all(summary.to_csv()?.as_bytes())?;
            writeln!(
                stdout,
                "{}",
                json!({ "traces": outcome.traces.len(), "failures": outcome.failures.len() })
            )?;
            Ok(())
        }
        Command::DegreeHist {
            graph,
            largest_component,
            out,
        } => {
            let g = load(&graph, largest_component)?;
            let mut text = String::from("degree,count\n");
            for (degree, count) in degree_histogram(&g) {
                text.push_str(&format!("{degree},{count}\n"));
            }
            emit(out.as_deref(), &text)
        }
    }
}
