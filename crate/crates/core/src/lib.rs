//! Selection of maximally independent committees in social graphs.
//!
//! A committee of `k` nodes scores higher the farther apart its members sit
//! (see [`independence`]). The main solver is an adaptive hybrid of binary
//! particle swarm optimization with hill climbing and simulated annealing,
//! where a UCB bandit picks the local search applied each generation.
//! Baselines and a benchmark harness live alongside it.

pub mod bpso;
pub mod distance;
pub mod error;
pub mod graph;
pub mod harness;
pub mod independence;
pub mod instance;
pub mod local_search;
pub mod metrics;
pub mod selector;
pub mod solver;

pub use bpso::{sigmoid, Particle, Swarm, SwarmConfig, Topology};
pub use distance::{DistanceMatrix, DistanceOracle};
pub use error::{Error, Result};
pub use graph::{load_edge_list, Distance, Graph, NodeId};
pub use harness::{ExperimentPlan, RunTrace, Summary};
pub use independence::{fitness, random_committee, Committee, CommitteeReport, FitnessValue, Scored};
pub use instance::Instance;
pub use local_search::{AnnealConfig, HillClimbConfig, LocalSearchKind};
pub use metrics::{centralities, degree_histogram, global_metrics, Centrality, GraphMetrics};
pub use selector::BanditState;
pub use solver::{run_baseline, run_hybrid, solve, Algorithm, GaConfig, SolveResult, SolverConfig, TraceRecord};
