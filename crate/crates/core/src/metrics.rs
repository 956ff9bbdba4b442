//! Whole-network statistics and per-node centralities.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, UNSEEN};

/// Sources handled per parallel work unit. Partial sums are combined in
/// chunk order so results do not depend on the thread count.
const SOURCES_PER_CHUNK: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphMetrics {
    pub node_count: usize,
    pub edge_count: usize,
    pub diameter: u32,
    /// Mean geodesic distance over ordered pairs of distinct nodes.
    pub average_shortest_path: f64,
    pub average_degree: f64,
    /// Mean local clustering coefficient; nodes of degree < 2 count as 0.
    pub clustering_coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Centrality {
    pub node: NodeId,
    pub original_id: u64,
    pub degree: usize,
    pub betweenness: f64,
    pub closeness: f64,
}

fn require_connected(g: &Graph) -> Result<()> {
    let (_, components) = g.connected_components();
    if components == 1 {
        Ok(())
    } else {
        Err(Error::Disconnected { components })
    }
}

/// Exact metrics from a BFS sweep over every source.
pub fn global_metrics(g: &Graph) -> Result<GraphMetrics> {
    require_connected(g)?;
    let n = g.node_count();
    let chunks: Vec<(u32, u64)> = (0..n)
        .collect::<Vec<_>>()
        .par_chunks(SOURCES_PER_CHUNK)
        .map(|sources| {
            let mut dist = vec![UNSEEN; n];
            let mut queue = VecDeque::new();
            let (mut ecc, mut total) = (0u32, 0u64);
            for &s in sources {
                g.bfs_into(s, &mut dist, &mut queue);
                for &d in &dist {
                    ecc = ecc.max(d);
                    total += u64::from(d);
                }
            }
            (ecc, total)
        })
        .collect();
    let diameter = chunks.iter().map(|c| c.0).max().unwrap_or(0);
    let total: u64 = chunks.iter().map(|c| c.1).sum();
    let ordered_pairs = (n as u64) * (n as u64 - 1);
    let average_shortest_path = if ordered_pairs == 0 {
        0.0
    } else {
        total as f64 / ordered_pairs as f64
    };
    Ok(GraphMetrics {
        node_count: n,
        edge_count: g.edge_count(),
        diameter,
        average_shortest_path,
        average_degree: 2.0 * g.edge_count() as f64 / n as f64,
        clustering_coefficient: average_clustering(g),
    })
}

/// Local clustering coefficient of every node.
pub fn local_clustering(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let mut mark = vec![false; n];
    (0..n)
        .map(|u| {
            let nbrs = g.neighbors(u);
            let d = nbrs.len();
            if d < 2 {
                return 0.0;
            }
            for &v in nbrs {
                mark[v] = true;
            }
            // each edge among neighbors is seen from both ends
            let twice_links: usize = nbrs
                .iter()
                .map(|&v| g.neighbors(v).iter().filter(|&&w| mark[w]).count())
                .sum();
            for &v in nbrs {
                mark[v] = false;
            }
            twice_links as f64 / (d * (d - 1)) as f64
        })
        .collect()
}

pub fn average_clustering(g: &Graph) -> f64 {
    let local = local_clustering(g);
    local.iter().sum::<f64>() / local.len() as f64
}

/// Unnormalized betweenness of every node (Brandes accumulation; each
/// unordered pair counted once, endpoints excluded).
pub fn betweenness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let partials: Vec<Vec<f64>> = (0..n)
        .collect::<Vec<_>>()
        .par_chunks(SOURCES_PER_CHUNK)
        .map(|sources| {
            let mut acc = vec![0.0; n];
            let mut dist = vec![UNSEEN; n];
            let mut sigma = vec![0.0f64; n];
            let mut delta = vec![0.0f64; n];
            let mut order = Vec::with_capacity(n);
            let mut queue = VecDeque::new();
            for &s in sources {
                dist.fill(UNSEEN);
                sigma.fill(0.0);
                delta.fill(0.0);
                order.clear();
                dist[s] = 0;
                sigma[s] = 1.0;
                queue.push_back(s);
                while let Some(u) = queue.pop_front() {
                    order.push(u);
                    for &v in g.neighbors(u) {
                        if dist[v] == UNSEEN {
                            dist[v] = dist[u] + 1;
                            queue.push_back(v);
                        }
                        if dist[v] == dist[u] + 1 {
                            sigma[v] += sigma[u];
                        }
                    }
                }
                for &w in order.iter().rev() {
                    for &v in g.neighbors(w) {
                        if dist[v] != UNSEEN && dist[v] + 1 == dist[w] {
                            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                        }
                    }
                    if w != s {
                        acc[w] += delta[w];
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    // every unordered pair was accumulated from both endpoints
    total.iter_mut().for_each(|b| *b /= 2.0);
    total
}

/// Degree, betweenness and closeness `(n - 1) / sum of distances` for the
/// listed nodes.
pub fn centralities(g: &Graph, nodes: &[NodeId]) -> Result<Vec<Centrality>> {
    require_connected(g)?;
    for &u in nodes {
        g.check_node(u)?;
    }
    let between = betweenness(g);
    let n = g.node_count();
    let mut dist = vec![UNSEEN; n];
    let mut queue = VecDeque::new();
    Ok(nodes
        .iter()
        .map(|&u| {
            g.bfs_into(u, &mut dist, &mut queue);
            let total: u64 = dist.iter().map(|&d| u64::from(d)).sum();
            let closeness = if total == 0 {
                0.0
            } else {
                (n - 1) as f64 / total as f64
            };
            Centrality {
                node: u,
                original_id: g.original_id(u),
                degree: g.degree(u),
                betweenness: between[u],
                closeness,
            }
        })
        .collect())
}

/// `(degree, count)` pairs in ascending degree order.
pub fn degree_histogram(g: &Graph) -> Vec<(usize, usize)> {
    let mut counts = std::collections::BTreeMap::new();
    for u in 0..g.node_count() {
        *counts.entry(g.degree(u)).or_insert(0) += 1;
    }
    counts.into_iter().collect()
}
