//! Distance lookups used by the fitness function.
//!
//! Solvers evaluate tens of thousands of committees per run, so they read
//! distances from a precomputed [`DistanceMatrix`]. Any [`Graph`] can also
//! answer directly with one BFS per member.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, UNSEEN};

/// Largest graph for which a dense matrix is built (about 144 MB).
pub const DENSE_NODE_LIMIT: usize = 12_000;

const NO_PATH: u8 = u8::MAX;

pub trait DistanceOracle {
    fn node_count(&self) -> usize;

    /// Distances for every unordered pair `(members[i], members[j])`, `i < j`,
    /// in row-major order.
    fn member_distances(&self, members: &[NodeId]) -> Result<Vec<u32>>;
}

impl DistanceOracle for Graph {
    fn node_count(&self) -> usize {
        Graph::node_count(self)
    }

    fn member_distances(&self, members: &[NodeId]) -> Result<Vec<u32>> {
        let matrix = self.pairwise_distances(members)?;
        let m = members.len();
        let mut out = Vec::with_capacity(m * m.saturating_sub(1) / 2);
        for i in 0..m {
            out.extend_from_slice(&matrix[i][i + 1..]);
        }
        Ok(out)
    }
}

/// All-pairs hop distances stored one byte per pair.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    cells: Vec<u8>,
    diameter: u32,
    connected: bool,
}

impl DistanceMatrix {
    /// Returns `None` when the graph is too large or some distance does not
    /// fit in a byte.
    pub fn build(g: &Graph) -> Option<Self> {
        let n = g.node_count();
        if n > DENSE_NODE_LIMIT {
            return None;
        }
        let mut cells = vec![NO_PATH; n * n];
        let ok = cells
            .par_chunks_mut(n)
            .enumerate()
            .map_init(
                || (vec![UNSEEN; n], VecDeque::new()),
                |(dist, queue), (source, row)| {
                    g.bfs_into(source, dist, queue);
                    let mut ecc = 0;
                    let mut reached = true;
                    for (cell, &d) in row.iter_mut().zip(dist.iter()) {
                        if d == UNSEEN {
                            reached = false;
                        } else if d >= u32::from(NO_PATH) {
                            return None;
                        } else {
                            *cell = d as u8;
                            ecc = ecc.max(d);
                        }
                    }
                    Some((ecc, reached))
                },
            )
            .collect::<Option<Vec<_>>>()?;
        Some(DistanceMatrix {
            n,
            cells,
            diameter: ok.iter().map(|r| r.0).max().unwrap_or(0),
            connected: ok.iter().all(|r| r.1),
        })
    }

    pub fn distance(&self, u: NodeId, v: NodeId) -> Option<u32> {
        let d = self.cells[u * self.n + v];
        (d != NO_PATH).then_some(u32::from(d))
    }

    /// Largest finite distance.
    pub fn diameter(&self) -> u32 {
        self.diameter
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }
}

impl DistanceOracle for DistanceMatrix {
    fn node_count(&self) -> usize {
        self.n
    }

    fn member_distances(&self, members: &[NodeId]) -> Result<Vec<u32>> {
        let m = members.len();
        let mut out = Vec::with_capacity(m * m.saturating_sub(1) / 2);
        for (i, &u) in members.iter().enumerate() {
            if u >= self.n {
                return Err(Error::NodeOutOfRange {
                    node: u,
                    node_count: self.n,
                });
            }
            for &v in &members[i + 1..] {
                if v >= self.n {
                    return Err(Error::NodeOutOfRange {
                        node: v,
                        node_count: self.n,
                    });
                }
                if u == v {
                    return Err(Error::DuplicateNode(u));
                }
                out.push(self.distance(u, v).ok_or(Error::UnreachablePair(u, v))?);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{graph, path};

    #[test]
    fn matrix_matches_bfs() {
        let g = graph(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (2, 5), (5, 6)]);
        let m = DistanceMatrix::build(&g).unwrap();
        for u in 0..g.node_count() {
            let row = g.shortest_path_lengths(u).unwrap();
            for (v, &d) in row.iter().enumerate() {
                assert_eq!(m.distance(u, v), d);
            }
        }
        assert_eq!(m.diameter(), 4);
        assert!(m.is_connected());
    }

    #[test]
    fn member_distances_agree() {
        let g = path(6);
        let m = DistanceMatrix::build(&g).unwrap();
        let members = [0, 2, 5];
        assert_eq!(m.member_distances(&members).unwrap(), vec![2, 5, 3]);
        assert_eq!(g.member_distances(&members).unwrap(), vec![2, 5, 3]);
    }

    #[test]
    fn unreachable_pairs_are_reported() {
        let g = graph(&[(0, 1), (2, 3)]);
        let m = DistanceMatrix::build(&g).unwrap();
        assert!(!m.is_connected());
        assert_eq!(m.distance(0, 2), None);
        assert!(matches!(
            m.member_distances(&[0, 3]),
            Err(Error::UnreachablePair(0, 3))
        ));
    }

    #[test]
    fn long_paths_do_not_fit() {
        assert!(DistanceMatrix::build(&path(300)).is_none());
        assert_eq!(DistanceMatrix::build(&path(255)).unwrap().diameter(), 254);
    }
}
