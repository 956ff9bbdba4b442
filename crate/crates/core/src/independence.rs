//! Committees and the geodesic independence fitness.
//!
//! For a committee of `k` members with pairwise distances `s(i, j)`, diameter
//! `D` and minimum pair distance `L`:
//!
//! ```text
//! f = (mean over the k(k-1)/2 unordered pairs of s(i, j) + L) / (2 D)
//! ```
//!
//! so `0 < f <= 1` on a connected graph, with `f = 1` exactly when every pair
//! sits at distance `D`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::distance::DistanceOracle;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// A set of `k >= 2` distinct nodes, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Committee {
    members: Vec<NodeId>,
}

impl Committee {
    pub fn new(mut members: Vec<NodeId>, node_count: usize) -> Result<Self> {
        check_size(members.len(), node_count)?;
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateNode(w[0]));
        }
        if let Some(&last) = members.last() {
            if last >= node_count {
                return Err(Error::NodeOutOfRange {
                    node: last,
                    node_count,
                });
            }
        }
        Ok(Committee { members })
    }

    /// Caller guarantees sorted, distinct, in-range members.
    pub(crate) fn from_sorted(members: Vec<NodeId>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Committee { members }
    }

    /// Members are the set bits of `bits`.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let members: Vec<NodeId> = bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect();
        check_size(members.len(), bits.len())?;
        Ok(Committee { members })
    }

    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn k(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.members.binary_search(&node).is_ok()
    }

    pub fn to_bits(&self, node_count: usize) -> Vec<bool> {
        let mut bits = vec![false; node_count];
        for &m in &self.members {
            bits[m] = true;
        }
        bits
    }

    pub fn original_ids(&self, g: &Graph) -> Vec<u64> {
        self.members.iter().map(|&m| g.original_id(m)).collect()
    }

    /// Replaces the member at `index` with `incoming`, keeping order.
    pub(crate) fn swapped(&self, index: usize, incoming: NodeId) -> Committee {
        let mut members = self.members.clone();
        members.remove(index);
        let at = members.partition_point(|&m| m < incoming);
        members.insert(at, incoming);
        Committee { members }
    }
}

pub(crate) fn check_size(k: usize, node_count: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidCommitteeSize {
            k,
            reason: "a committee needs at least 2 members".into(),
        });
    }
    if k > node_count {
        return Err(Error::InvalidCommitteeSize {
            k,
            reason: format!("the graph has only {node_count} nodes"),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessValue {
    pub value: f64,
    pub mean_pair_distance: f64,
    pub min_pair_distance: u32,
}

/// A committee together with its fitness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scored {
    pub committee: Committee,
    pub fitness: FitnessValue,
}

impl Scored {
    pub fn value(&self) -> f64 {
        self.fitness.value
    }
}

pub fn fitness<O>(oracle: &O, diameter: u32, committee: &Committee) -> Result<FitnessValue>
where
    O: DistanceOracle + ?Sized,
{
    if diameter == 0 {
        return Err(Error::ZeroDiameter);
    }
    check_size(committee.k(), oracle.node_count())?;
    let pairs = oracle.member_distances(committee.members())?;
    Ok(fitness_from_pairs(&pairs, diameter))
}

pub(crate) fn fitness_from_pairs(pairs: &[u32], diameter: u32) -> FitnessValue {
    let sum: u64 = pairs.iter().map(|&d| u64::from(d)).sum();
    let min = pairs.iter().copied().min().unwrap_or(0);
    let mean = sum as f64 / pairs.len() as f64;
    FitnessValue {
        value: (mean + f64::from(min)) / (2.0 * f64::from(diameter)),
        mean_pair_distance: mean,
        min_pair_distance: min,
    }
}

pub fn score<O>(oracle: &O, diameter: u32, committee: Committee) -> Result<Scored>
where
    O: DistanceOracle + ?Sized,
{
    let fitness = fitness(oracle, diameter, &committee)?;
    Ok(Scored { committee, fitness })
}

/// `k` distinct nodes drawn uniformly without replacement.
pub fn random_committee<R: Rng + ?Sized>(node_count: usize, k: usize, rng: &mut R) -> Result<Committee> {
    check_size(k, node_count)?;
    let mut members = rand::seq::index::sample(rng, node_count, k).into_vec();
    members.sort_unstable();
    Ok(Committee { members })
}

/// Committee as reported in output documents: original node ids plus the
/// fitness breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommitteeReport {
    pub members: Vec<u64>,
    #[serde(flatten)]
    pub fitness: FitnessValue,
}

impl CommitteeReport {
    pub fn new(g: &Graph, scored: &Scored) -> Self {
        CommitteeReport {
            members: scored.committee.original_ids(g),
            fitness: scored.fitness,
        }
    }
}
