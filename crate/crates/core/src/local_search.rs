//! Hill climbing and simulated annealing over committees, using a single
//! member swap as the neighborhood move.
//!
//! Both searches return the best committee they visit, so the result is never
//! worse than the start.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::independence::{Committee, Scored};
use crate::instance::Instance;

/// Neighborhoods up to this many one-swap moves are scanned exhaustively.
pub const EXHAUSTIVE_SCAN_LIMIT: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LocalSearchKind {
    #[serde(rename = "hc")]
    HillClimbing,
    #[serde(rename = "sa")]
    SimulatedAnnealing,
}

impl LocalSearchKind {
    pub fn tag(self) -> &'static str {
        match self {
            LocalSearchKind::HillClimbing => "hc",
            LocalSearchKind::SimulatedAnnealing => "sa",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "hc" => Some(LocalSearchKind::HillClimbing),
            "sa" => Some(LocalSearchKind::SimulatedAnnealing),
            _ => None,
        }
    }
}

impl fmt::Display for LocalSearchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HillClimbConfig {
    pub max_iterations: u64,
}

impl Default for HillClimbConfig {
    fn default() -> Self {
        HillClimbConfig {
            max_iterations: 3000,
        }
    }
}

impl HillClimbConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::config("hill climbing needs at least one iteration"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealConfig {
    pub t_max: f64,
    pub t_min: f64,
    /// Geometric cooling factor applied after each temperature.
    pub beta: f64,
    /// Proposals per temperature.
    pub inner_loops: u64,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            t_max: 1000.0,
            t_min: 1.0,
            beta: 0.99,
            inner_loops: 1,
        }
    }
}

impl AnnealConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0 && self.t_min < self.t_max && self.t_max.is_finite()) {
            return Err(Error::config("temperatures must satisfy 0 < t_min < t_max"));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::config("cooling rate must lie in (0, 1)"));
        }
        if self.inner_loops == 0 {
            return Err(Error::config("at least one proposal per temperature is required"));
        }
        Ok(())
    }

    /// Number of temperatures visited from `t_max` down to `t_min`.
    pub fn temperature_steps(&self) -> u64 {
        let mut t = self.t_max;
        let mut steps = 0;
        while t >= self.t_min {
            steps += 1;
            t *= self.beta;
        }
        steps
    }
}

/// Result of one local search call.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub best: Scored,
    /// Neighbor evaluations spent (the start is not re-evaluated).
    pub evaluations: u64,
}

/// Snapshot handed to progress observers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Progress {
    pub step: u64,
    pub best: f64,
    pub evaluations: u64,
}

/// Replaces one uniformly chosen member with one uniformly chosen non-member.
pub fn swap_neighbor<R: Rng + ?Sized>(c: &Committee, node_count: usize, rng: &mut R) -> Result<Committee> {
    let k = c.k();
    if k >= node_count {
        return Err(Error::InvalidCommitteeSize {
            k,
            reason: "no non-member left to swap in".into(),
        });
    }
    let out = rng.gen_range(0..k);
    let incoming = if 2 * k <= node_count {
        loop {
            let v = rng.gen_range(0..node_count);
            if !c.contains(v) {
                break v;
            }
        }
    } else {
        let outside: Vec<NodeId> = (0..node_count).filter(|&v| !c.contains(v)).collect();
        outside[rng.gen_range(0..outside.len())]
    };
    Ok(c.swapped(out, incoming))
}

/// Metropolis acceptance for a maximized objective.
pub fn acceptance_probability(f_current: f64, f_neighbor: f64, temperature: f64) -> Result<f64> {
    if temperature.is_nan() || temperature <= 0.0 {
        return Err(Error::NonPositiveTemperature(temperature));
    }
    if f_neighbor >= f_current {
        Ok(1.0)
    } else {
        Ok((-(f_current - f_neighbor) / temperature).exp())
    }
}

pub fn hill_climb<R: Rng + ?Sized>(
    start: &Scored,
    instance: &Instance,
    cfg: &HillClimbConfig,
    rng: &mut R,
) -> Result<SearchOutcome> {
    hill_climb_observed(start, instance, cfg, rng, &mut |_| {})
}

/// First-improvement hill climbing. Small neighborhoods are scanned in a
/// random order and the search stops at a local optimum; larger ones are
/// sampled until the budget runs out. `observe` sees every proposal.
pub fn hill_climb_observed<R: Rng + ?Sized>(
    start: &Scored,
    instance: &Instance,
    cfg: &HillClimbConfig,
    rng: &mut R,
    observe: &mut dyn FnMut(Progress),
) -> Result<SearchOutcome> {
    cfg.validate()?;
    let n = instance.node_count();
    let k = start.committee.k();
    let budget = cfg.max_iterations;
    let mut current = start.clone();
    let mut evaluations = 0;

    if k * n <= EXHAUSTIVE_SCAN_LIMIT {
        'passes: while evaluations < budget {
            let mut moves: Vec<(usize, NodeId)> = (0..k)
                .flat_map(|i| (0..n).map(move |v| (i, v)))
                .filter(|&(_, v)| !current.committee.contains(v))
                .collect();
            moves.shuffle(rng);
            for (i, v) in moves {
                let candidate = instance.score(current.committee.swapped(i, v))?;
                evaluations += 1;
                let improved = candidate.value() > current.value();
                if improved {
                    current = candidate;
                }
                observe(Progress {
                    step: evaluations,
                    best: current.value(),
                    evaluations,
                });
                if improved {
                    continue 'passes;
                }
                if evaluations == budget {
                    break 'passes;
                }
            }
            // full pass without improvement: local optimum
            break;
        }
    } else {
        while evaluations < budget {
            let candidate = instance.score(swap_neighbor(&current.committee, n, rng)?)?;
            evaluations += 1;
            if candidate.value() > current.value() {
                current = candidate;
            }
            observe(Progress {
                step: evaluations,
                best: current.value(),
                evaluations,
            });
        }
    }
    Ok(SearchOutcome {
        best: current,
        evaluations,
    })
}

pub fn simulated_annealing<R: Rng + ?Sized>(
    start: &Scored,
    instance: &Instance,
    cfg: &AnnealConfig,
    rng: &mut R,
) -> Result<SearchOutcome> {
    simulated_annealing_observed(start, instance, cfg, None, rng, &mut |_| {})
}

/// Geometric-cooling annealing that stops early once `max_evaluations`
/// proposals have been made. `observe` is called after each temperature.
pub fn simulated_annealing_observed<R: Rng + ?Sized>(
    start: &Scored,
    instance: &Instance,
    cfg: &AnnealConfig,
    max_evaluations: Option<u64>,
    rng: &mut R,
    observe: &mut dyn FnMut(Progress),
) -> Result<SearchOutcome> {
    cfg.validate()?;
    let n = instance.node_count();
    let budget = max_evaluations.unwrap_or(u64::MAX);
    let mut current = start.clone();
    let mut best = start.clone();
    let mut evaluations = 0;
    let mut temperature = cfg.t_max;
    let mut step = 0;

    while temperature >= cfg.t_min && evaluations < budget {
        for _ in 0..cfg.inner_loops {
            if evaluations == budget {
                break;
            }
            let candidate = instance.score(swap_neighbor(&current.committee, n, rng)?)?;
            evaluations += 1;
            let p = acceptance_probability(current.value(), candidate.value(), temperature)?;
            if p >= 1.0 || rng.gen::<f64>() < p {
                current = candidate;
                if current.value() > best.value() {
                    best = current.clone();
                }
            }
        }
        step += 1;
        observe(Progress {
            step,
            best: best.value(),
            evaluations,
        });
        temperature *= cfg.beta;
    }
    Ok(SearchOutcome { best, evaluations })
}
