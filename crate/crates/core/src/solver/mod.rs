//! The adaptive hybrid solver and the baselines it is compared against.
//!
//! Every algorithm produces the same [`SolveResult`] shape. A run is fully
//! determined by `(graph, config, seed)`; wall-clock fields are zero unless
//! [`SolverConfig::record_timing`] is set.

mod ga;
mod trace;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use ga::GaConfig;
pub use trace::{read_trace_csv, write_trace_csv, TraceRecord, TRACE_HEADER};

use crate::bpso::{Swarm, SwarmConfig};
use crate::error::{Error, Result};
use crate::independence::{check_size, random_committee, Committee, CommitteeReport, Scored};
use crate::instance::Instance;
use crate::local_search::{
    hill_climb, hill_climb_observed, simulated_annealing_observed, AnnealConfig, HillClimbConfig,
    LocalSearchKind, Progress, SearchOutcome,
};
use crate::selector::{compute_reward, BanditState};

use ga::Genetic;

const SWARM_STREAM: u64 = 0;
const LOCAL_SEARCH_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Hybrid,
    Bpso,
    Ga,
    Sa,
    Hc,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Hybrid,
        Algorithm::Bpso,
        Algorithm::Ga,
        Algorithm::Sa,
        Algorithm::Hc,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Hybrid => "hybrid",
            Algorithm::Bpso => "bpso",
            Algorithm::Ga => "ga",
            Algorithm::Sa => "sa",
            Algorithm::Hc => "hc",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.tag() == s)
            .ok_or_else(|| Error::config(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub k: usize,
    pub seed: u64,
    /// Swarm parameters; `swarm.max_iterations` is also the GA generation count.
    pub swarm: SwarmConfig,
    /// Budget of the standalone hill climbing baseline.
    pub hill_climb: HillClimbConfig,
    pub anneal: AnnealConfig,
    /// Exploration scale `C` of the bandit.
    pub bandit_scale: f64,
    /// Neighbor evaluations allowed per local search call inside the hybrid.
    /// Zero disables local search.
    pub local_search_budget: u64,
    pub local_searches: Vec<LocalSearchKind>,
    pub ga: GaConfig,
    pub record_timing: bool,
}

impl SolverConfig {
    pub fn new(algorithm: Algorithm, k: usize, seed: u64) -> Self {
        SolverConfig {
            algorithm,
            k,
            seed,
            swarm: SwarmConfig::default(),
            hill_climb: HillClimbConfig::default(),
            anneal: AnnealConfig::default(),
            bandit_scale: 0.01,
            local_search_budget: 100,
            local_searches: vec![LocalSearchKind::HillClimbing, LocalSearchKind::SimulatedAnnealing],
            ga: GaConfig::default(),
            record_timing: false,
        }
    }

    pub fn validate(&self, node_count: usize) -> Result<()> {
        check_size(self.k, node_count)?;
        self.swarm.validate()?;
        self.hill_climb.validate()?;
        self.anneal.validate()?;
        self.ga.validate()?;
        if self.local_searches.is_empty() {
            return Err(Error::config("at least one local search is required"));
        }
        if !(self.bandit_scale >= 0.0 && self.bandit_scale.is_finite()) {
            return Err(Error::config("bandit scaling factor must be non-negative"));
        }
        if self.k == node_count {
            return Err(Error::InvalidCommitteeSize {
                k: self.k,
                reason: "k must be smaller than the number of nodes".into(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub config: SolverConfig,
    pub best: CommitteeReport,
    pub evaluations: u64,
    pub wall_time_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bandit: Option<BanditState>,
    pub trace: Vec<TraceRecord>,
}

impl SolveResult {
    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }
}

/// True once `iteration` has reached the configured maximum.
pub fn stop_criterion(iteration: u64, max_iterations: u64) -> bool {
    iteration >= max_iterations
}

struct Clock {
    start: Instant,
    enabled: bool,
}

impl Clock {
    fn new(enabled: bool) -> Self {
        Clock {
            start: Instant::now(),
            enabled,
        }
    }

    fn millis(&self) -> u64 {
        if self.enabled {
            self.start.elapsed().as_millis() as u64
        } else {
            0
        }
    }
}

fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn finish(
    instance: &Instance,
    cfg: &SolverConfig,
    best: &Scored,
    evaluations: u64,
    clock: &Clock,
    bandit: Option<BanditState>,
    trace: Vec<TraceRecord>,
) -> SolveResult {
    SolveResult {
        config: cfg.clone(),
        best: CommitteeReport::new(instance.graph(), best),
        evaluations,
        wall_time_ms: clock.millis(),
        bandit,
        trace,
    }
}

/// Runs whichever algorithm `cfg` names.
pub fn solve(instance: &Instance, cfg: &SolverConfig) -> Result<SolveResult> {
    match cfg.algorithm {
        Algorithm::Hybrid => run_hybrid(instance, cfg),
        _ => run_baseline(instance, cfg),
    }
}

/// Swarm generations, each followed by one bandit-chosen local search on the
/// global best.
pub fn run_hybrid(instance: &Instance, cfg: &SolverConfig) -> Result<SolveResult> {
    cfg.validate(instance.node_count())?;
    swarm_loop(instance, cfg, cfg.local_search_budget)
}

fn swarm_loop(instance: &Instance, cfg: &SolverConfig, ls_budget: u64) -> Result<SolveResult> {
    let clock = Clock::new(cfg.record_timing);
    let mut swarm = Swarm::new(instance, cfg.k, &cfg.swarm, stream(cfg.seed, SWARM_STREAM))?;
    let mut ls_rng = stream(cfg.seed, LOCAL_SEARCH_STREAM);
    let mut bandit = BanditState::new(cfg.local_searches.len(), cfg.bandit_scale)?;
    let mut ls_evaluations = 0;

    let mut trace = vec![TraceRecord::new(
        0,
        swarm.global_best().value(),
        swarm.evaluations(),
        clock.millis(),
    )];
    while !stop_criterion(swarm.iteration(), cfg.swarm.max_iterations) {
        swarm.step(instance, &cfg.swarm)?;
        let mut record = TraceRecord::new(swarm.iteration(), 0.0, 0, 0);

        if ls_budget > 0 {
            let arm = bandit.select();
            let kind = cfg.local_searches[arm];
            let before = swarm.global_best().clone();
            let outcome = run_local_search(kind, &before, instance, cfg, ls_budget, &mut ls_rng)?;
            ls_evaluations += outcome.evaluations;
            let reward = compute_reward(before.value(), outcome.best.value())?;
            bandit.update(arm, reward)?;
            swarm.offer(outcome.best);
            record.selected_ls = Some(kind);
            record.reward = Some(reward);
            record.qualities = Some(bandit.qualities());
        }

        record.best_fitness = swarm.global_best().value();
        record.evaluations = swarm.evaluations() + ls_evaluations;
        record.elapsed_ms = clock.millis();
        trace.push(record);
    }

    let evaluations = swarm.evaluations() + ls_evaluations;
    let bandit = (ls_budget > 0).then_some(bandit);
    Ok(finish(instance, cfg, swarm.global_best(), evaluations, &clock, bandit, trace))
}

fn run_local_search(
    kind: LocalSearchKind,
    start: &Scored,
    instance: &Instance,
    cfg: &SolverConfig,
    budget: u64,
    rng: &mut ChaCha8Rng,
) -> Result<SearchOutcome> {
    match kind {
        LocalSearchKind::HillClimbing => {
            hill_climb(start, instance, &HillClimbConfig { max_iterations: budget }, rng)
        }
        LocalSearchKind::SimulatedAnnealing => {
            simulated_annealing_observed(start, instance, &cfg.anneal, Some(budget), rng, &mut |_| {})
        }
    }
}

/// Plain BPSO, GA, or a standalone local search from a random committee.
pub fn run_baseline(instance: &Instance, cfg: &SolverConfig) -> Result<SolveResult> {
    cfg.validate(instance.node_count())?;
    match cfg.algorithm {
        Algorithm::Bpso => swarm_loop(instance, cfg, 0),
        Algorithm::Ga => {
            let mut rng = stream(cfg.seed, SWARM_STREAM);
            let genetic = Genetic::random(instance, &cfg.ga, cfg.k, &mut rng)?;
            ga_loop(instance, cfg, genetic, rng)
        }
        Algorithm::Hc | Algorithm::Sa => standalone_local_search(instance, cfg),
        Algorithm::Hybrid => Err(Error::config("the hybrid is not a baseline")),
    }
}

/// GA starting from a caller-supplied population.
pub fn run_ga_from(instance: &Instance, cfg: &SolverConfig, population: Vec<Committee>) -> Result<SolveResult> {
    cfg.validate(instance.node_count())?;
    if population.iter().any(|c| c.k() != cfg.k) {
        return Err(Error::config("initial population has the wrong committee size"));
    }
    let genetic = Genetic::from_population(instance, &cfg.ga, population)?;
    ga_loop(instance, cfg, genetic, stream(cfg.seed, SWARM_STREAM))
}

fn ga_loop(instance: &Instance, cfg: &SolverConfig, mut genetic: Genetic, mut rng: ChaCha8Rng) -> Result<SolveResult> {
    let clock = Clock::new(cfg.record_timing);
    let mut trace = vec![TraceRecord::new(
        0,
        genetic.best().value(),
        genetic.evaluations,
        clock.millis(),
    )];
    let mut generation = 0;
    while !stop_criterion(generation, cfg.swarm.max_iterations) {
        genetic.generation(&mut rng)?;
        generation += 1;
        trace.push(TraceRecord::new(
            generation,
            genetic.best().value(),
            genetic.evaluations,
            clock.millis(),
        ));
    }
    Ok(finish(instance, cfg, genetic.best(), genetic.evaluations, &clock, None, trace))
}

fn standalone_local_search(instance: &Instance, cfg: &SolverConfig) -> Result<SolveResult> {
    let clock = Clock::new(cfg.record_timing);
    let mut rng = stream(cfg.seed, SWARM_STREAM);
    let start = instance.score(random_committee(instance.node_count(), cfg.k, &mut rng)?)?;
    let mut trace = vec![TraceRecord::new(0, start.value(), 1, clock.millis())];
    let mut observe = |p: Progress| {
        trace.push(TraceRecord::new(p.step, p.best, 1 + p.evaluations, clock.millis()));
    };
    let outcome = match cfg.algorithm {
        Algorithm::Hc => hill_climb_observed(&start, instance, &cfg.hill_climb, &mut rng, &mut observe)?,
        _ => simulated_annealing_observed(&start, instance, &cfg.anneal, None, &mut rng, &mut observe)?,
    };
    Ok(finish(instance, cfg, &outcome.best, 1 + outcome.evaluations, &clock, None, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::path;

    fn cfg(algorithm: Algorithm, k: usize, seed: u64, iterations: u64) -> SolverConfig {
        let mut c = SolverConfig::new(algorithm, k, seed);
        c.swarm.max_iterations = iterations;
        c
    }

    #[test]
    fn stop_rule() {
        assert!(!stop_criterion(499, 500));
        assert!(stop_criterion(500, 500));
        assert!(stop_criterion(0, 0));
    }

    #[test]
    fn hybrid_finds_path_endpoints() {
        let inst = Instance::new(path(4)).unwrap();
        for seed in 0..5 {
            let r = run_hybrid(&inst, &cfg(Algorithm::Hybrid, 2, seed, 10)).unwrap();
            assert_eq!(r.best.members, vec![0, 3]);
            assert_eq!(r.best.fitness.value, 1.0);
        }
    }

    #[test]
    fn hybrid_warm_up_and_accounting() {
        let inst = Instance::new(path(9)).unwrap();
        let r = run_hybrid(&inst, &cfg(Algorithm::Hybrid, 3, 4, 2)).unwrap();
        let arms: Vec<_> = r.trace[1..].iter().map(|t| t.selected_ls.unwrap()).collect();
        assert_eq!(arms, vec![LocalSearchKind::HillClimbing, LocalSearchKind::SimulatedAnnealing]);
        let bandit = r.bandit.unwrap();
        assert!(bandit.arms().iter().all(|a| a.selections == 1));
        assert_eq!(r.evaluations, r.trace.last().unwrap().evaluations);
    }

    #[test]
    fn zero_iterations_returns_initial_best() {
        let inst = Instance::new(path(7)).unwrap();
        let r = run_hybrid(&inst, &cfg(Algorithm::Hybrid, 2, 1, 0)).unwrap();
        assert_eq!(r.trace.len(), 1);
        assert_eq!(r.evaluations, 30);
    }

    #[test]
    fn bpso_is_hybrid_without_local_search() {
        let inst = Instance::new(path(12)).unwrap();
        let bpso = run_baseline(&inst, &cfg(Algorithm::Bpso, 3, 9, 25)).unwrap();
        let mut disabled = cfg(Algorithm::Hybrid, 3, 9, 25);
        disabled.local_search_budget = 0;
        let hybrid = run_hybrid(&inst, &disabled).unwrap();
        assert_eq!(bpso.trace, hybrid.trace);
        assert_eq!(bpso.best, hybrid.best);
    }

    #[test]
    fn hc_baseline_on_path() {
        let inst = Instance::new(path(4)).unwrap();
        let r = run_baseline(&inst, &cfg(Algorithm::Hc, 2, 3, 500)).unwrap();
        assert_eq!(r.best.fitness.value, 1.0);
    }

    #[test]
    fn sa_baseline_trace_per_temperature() {
        let inst = Instance::new(path(10)).unwrap();
        let r = run_baseline(&inst, &cfg(Algorithm::Sa, 2, 3, 500)).unwrap();
        assert_eq!(r.trace.len(), 1 + 688);
        assert_eq!(r.evaluations, 1 + 688);
    }

    #[test]
    fn ga_identical_population_without_mutation_is_static() {
        let inst = Instance::new(path(10)).unwrap();
        let mut c = cfg(Algorithm::Ga, 3, 5, 40);
        c.ga.mutation_rate = 0.0;
        let same = Committee::new(vec![2, 3, 4], 10).unwrap();
        let r = run_ga_from(&inst, &c, vec![same; 50]).unwrap();
        let first = r.trace[0].best_fitness;
        assert!(r.trace.iter().all(|t| t.best_fitness == first));
        assert_eq!(r.best.members, vec![2, 3, 4]);
        assert_eq!(r.evaluations, c.ga.evaluations(40));
    }

    #[test]
    fn algorithm_tags_parse() {
        for a in Algorithm::ALL {
            assert_eq!(a.tag().parse::<Algorithm>().unwrap(), a);
        }
        assert!("pso".parse::<Algorithm>().is_err());
    }

    #[test]
    fn invalid_k_rejected() {
        let inst = Instance::new(path(5)).unwrap();
        assert!(solve(&inst, &cfg(Algorithm::Hybrid, 1, 0, 5)).is_err());
        assert!(solve(&inst, &cfg(Algorithm::Hybrid, 5, 0, 5)).is_err());
    }

    #[test]
    fn json_is_reproducible() {
        let inst = Instance::new(path(15)).unwrap();
        let c = cfg(Algorithm::Hybrid, 3, 21, 20);
        let a = solve(&inst, &c).unwrap().to_json().unwrap();
        let b = solve(&inst, &c).unwrap().to_json().unwrap();
        assert_eq!(a, b);
        let back: SolveResult = serde_json::from_str(&a).unwrap();
        assert_eq!(back.config, c);
    }
}
