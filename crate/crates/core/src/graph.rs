//! Undirected simple graphs loaded from SNAP-style edge lists, plus
//! breadth-first geodesic distances.
//!
//! Node ids are dense `0..node_count` after loading; the original ids from the
//! file are kept so results can be reported in the file's own numbering.

use std::collections::VecDeque;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub type NodeId = usize;

/// A geodesic distance. `None` means unreachable.
pub type Distance = Option<u32>;

/// Sentinel used only inside BFS scratch buffers; never escapes this module.
pub(crate) const UNSEEN: u32 = u32::MAX;

/// Immutable undirected simple graph in compressed adjacency form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
    original_ids: Vec<u64>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from `(u, v)` pairs given in original ids. Self-loops are
    /// dropped, duplicates collapsed, and ids remapped densely in ascending
    /// order of original id.
    pub fn from_edges<I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut pairs: Vec<(u64, u64)> = edges
            .into_iter()
            .filter(|(u, v)| u != v)
            .map(|(u, v)| if u < v { (u, v) } else { (v, u) })
            .collect();
        if pairs.is_empty() {
            return Err(Error::EmptyGraph);
        }
        pairs.sort_unstable();
        pairs.dedup();

        let mut ids: Vec<u64> = pairs.iter().flat_map(|&(u, v)| [u, v]).collect();
        ids.sort_unstable();
        ids.dedup();
        let dense = |id: u64| ids.binary_search(&id).expect("id collected above");

        let mut degree = vec![0usize; ids.len()];
        let remapped: Vec<(NodeId, NodeId)> = pairs
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (dense(u), dense(v));
                degree[a] += 1;
                degree[b] += 1;
                (a, b)
            })
            .collect();
        Ok(Self::from_dense(ids, &degree, &remapped))
    }

    /// `edges` must be deduplicated, loop-free, and use dense ids.
    fn from_dense(original_ids: Vec<u64>, degree: &[usize], edges: &[(NodeId, NodeId)]) -> Self {
        let n = original_ids.len();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0; offsets[n]];
        for &(u, v) in edges {
            neighbors[fill[u]] = v;
            fill[u] += 1;
            neighbors[fill[v]] = u;
            fill[v] += 1;
        }
        for u in 0..n {
            neighbors[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        Graph {
            offsets,
            neighbors,
            original_ids,
            edge_count: edges.len(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.original_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbor list of `u`.
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.neighbors[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn original_id(&self, u: NodeId) -> u64 {
        self.original_ids[u]
    }

    pub fn original_ids(&self) -> &[u64] {
        &self.original_ids
    }

    /// Dense id for an original id, if the node survived loading.
    pub fn node_for_original(&self, id: u64) -> Option<NodeId> {
        self.original_ids.binary_search(&id).ok()
    }

    /// Undirected edges, each once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| v > u)
                .map(move |&v| (u, v))
        })
    }

    pub(crate) fn check_node(&self, node: NodeId) -> Result<()> {
        if node < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node,
                node_count: self.node_count(),
            })
        }
    }

    /// Component label per node; labels are numbered in order of their
    /// smallest member.
    pub fn connected_components(&self) -> (Vec<usize>, usize) {
        let n = self.node_count();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if label[v] == usize::MAX {
                        label[v] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().1 == 1
    }

    /// Induced subgraph on the largest connected component. Ties go to the
    /// component holding the smallest node id.
    pub fn largest_component(&self) -> Graph {
        let (label, count) = self.connected_components();
        if count == 1 {
            return self.clone();
        }
        let mut sizes = vec![0usize; count];
        for &l in &label {
            sizes[l] += 1;
        }
        let keep = (0..count)
            .max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a)))
            .unwrap_or(0);

        let mut remap = vec![usize::MAX; self.node_count()];
        let mut original_ids = Vec::with_capacity(sizes[keep]);
        for u in 0..self.node_count() {
            if label[u] == keep {
                remap[u] = original_ids.len();
                original_ids.push(self.original_ids[u]);
            }
        }
        let mut degree = vec![0; original_ids.len()];
        let edges: Vec<(NodeId, NodeId)> = self
            .edges()
            .filter(|&(u, _)| label[u] == keep)
            .map(|(u, v)| {
                let (a, b) = (remap[u], remap[v]);
                degree[a] += 1;
                degree[b] += 1;
                (a, b)
            })
            .collect();
        Graph::from_dense(original_ids, &degree, &edges)
    }

    /// Hop distances from `source` to every node.
    pub fn shortest_path_lengths(&self, source: NodeId) -> Result<Vec<Distance>> {
        self.check_node(source)?;
        let mut dist = vec![UNSEEN; self.node_count()];
        let mut queue = VecDeque::new();
        self.bfs_into(source, &mut dist, &mut queue);
        Ok(dist
            .into_iter()
            .map(|d| (d != UNSEEN).then_some(d))
            .collect())
    }

    /// Full BFS from `source` into caller-owned scratch. Unreached entries
    /// are left at [`UNSEEN`]. Returns the number of nodes reached.
    pub(crate) fn bfs_into(&self, source: NodeId, dist: &mut [u32], queue: &mut VecDeque<NodeId>) -> usize {
        dist.fill(UNSEEN);
        queue.clear();
        dist[source] = 0;
        queue.push_back(source);
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            let next = dist[u] + 1;
            for &v in self.neighbors(u) {
                if dist[v] == UNSEEN {
                    dist[v] = next;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached
    }

    /// Symmetric matrix of geodesic distances between the listed nodes, one
    /// BFS per listed node (stopping once every later node has been found).
    pub fn pairwise_distances(&self, nodes: &[NodeId]) -> Result<Vec<Vec<u32>>> {
        for &u in nodes {
            self.check_node(u)?;
        }
        let mut sorted = nodes.to_vec();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateNode(w[0]));
        }

        let m = nodes.len();
        let mut matrix = vec![vec![0u32; m]; m];
        let mut dist = vec![UNSEEN; self.node_count()];
        let mut queue = VecDeque::new();
        for i in 0..m.saturating_sub(1) {
            let targets = &nodes[i + 1..];
            self.bfs_until_found(nodes[i], targets, &mut dist, &mut queue);
            for (j, &t) in targets.iter().enumerate() {
                if dist[t] == UNSEEN {
                    return Err(Error::UnreachablePair(nodes[i], t));
                }
                matrix[i][i + 1 + j] = dist[t];
                matrix[i + 1 + j][i] = dist[t];
            }
        }
        Ok(matrix)
    }

    fn bfs_until_found(
        &self,
        source: NodeId,
        targets: &[NodeId],
        dist: &mut [u32],
        queue: &mut VecDeque<NodeId>,
    ) {
        dist.fill(UNSEEN);
        queue.clear();
        dist[source] = 0;
        queue.push_back(source);
        let mut remaining = targets.iter().filter(|&&t| t != source).count();
        while let Some(u) = queue.pop_front() {
            if remaining == 0 {
                break;
            }
            let next = dist[u] + 1;
            for &v in self.neighbors(u) {
                if dist[v] == UNSEEN {
                    dist[v] = next;
                    if targets.contains(&v) {
                        remaining -= 1;
                    }
                    queue.push_back(v);
                }
            }
        }
    }

    /// Writes the graph back out as an edge list in original ids.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{} {}", self.original_ids[u], self.original_ids[v])?;
        }
        Ok(())
    }
}

/// Parses a SNAP edge list: `#` lines are comments, blank lines are skipped,
/// every other line holds exactly two non-negative integers.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Vec<(u64, u64)>> {
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let mut next_id = || -> Result<u64> {
            let field = fields.next().ok_or_else(|| Error::Parse {
                line: line_no,
                message: "expected two node ids".into(),
            })?;
            field.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("`{field}` is not a non-negative integer"),
            })
        };
        let u = next_id()?;
        let v = next_id()?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                message: "expected exactly two node ids".into(),
            });
        }
        edges.push((u, v));
    }
    Ok(edges)
}

pub fn load_edge_list(path: impl AsRef<Path>, restrict_to_largest_component: bool) -> Result<Graph> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let graph = Graph::from_edges(parse_edge_list(BufReader::new(file))?)?;
    Ok(if restrict_to_largest_component {
        graph.largest_component()
    } else {
        graph
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn graph(edges: &[(u64, u64)]) -> Graph {
        Graph::from_edges(edges.iter().copied()).unwrap()
    }

    pub fn path(n: u64) -> Graph {
        graph(&(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>())
    }

    pub fn triangle() -> Graph {
        graph(&[(0, 1), (1, 2), (2, 0)])
    }

    #[test]
    fn triangle_loads() {
        let g = parse_edge_list("0 1\n1 2\n2 0\n".as_bytes()).unwrap();
        let g = Graph::from_edges(g).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (3, 3));
    }

    #[test]
    fn duplicates_and_self_loops_removed() {
        let g = Graph::from_edges(parse_edge_list("0 1\n1 0\n1 1\n".as_bytes()).unwrap()).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));
        assert_eq!(g.neighbors(0), &[1]);
    }

    #[test]
    fn comments_and_blank_lines_skipped() {
        let text = "# Nodes: 3\n\n0\t1\n  # trailing comment\n1 2\n";
        assert_eq!(parse_edge_list(text.as_bytes()).unwrap(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse_edge_list("0 1\n1 x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_edge_list("0 1 2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_edge_list("# c\n7\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(parse_edge_list("-1 2\n".as_bytes()).is_err());
    }

    #[test]
    fn only_self_loops_is_empty() {
        assert!(matches!(Graph::from_edges([(3, 3)]), Err(Error::EmptyGraph)));
    }

    #[test]
    fn sparse_ids_are_remapped() {
        let g = graph(&[(10, 200), (200, 3000)]);
        assert_eq!(g.original_ids(), &[10, 200, 3000]);
        assert_eq!(g.node_for_original(200), Some(1));
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn largest_component_kept() {
        let g = graph(&[(0, 1), (2, 3), (3, 4), (4, 2), (5, 6)]);
        assert!(!g.is_connected());
        let lc = g.largest_component();
        assert_eq!(lc.original_ids(), &[2, 3, 4]);
        assert_eq!(lc.edge_count(), 3);
        assert!(lc.is_connected());
    }

    #[test]
    fn bfs_on_path_triangle_and_split() {
        assert_eq!(
            path(4).shortest_path_lengths(0).unwrap(),
            vec![Some(0), Some(1), Some(2), Some(3)]
        );
        assert_eq!(
            triangle().shortest_path_lengths(2).unwrap(),
            vec![Some(1), Some(1), Some(0)]
        );
        let split = graph(&[(0, 1), (2, 3)]);
        assert_eq!(
            split.shortest_path_lengths(0).unwrap(),
            vec![Some(0), Some(1), None, None]
        );
        assert!(matches!(
            split.shortest_path_lengths(4),
            Err(Error::NodeOutOfRange { node: 4, .. })
        ));
    }

    #[test]
    fn pairwise_on_path() {
        let p4 = path(4);
        assert_eq!(p4.pairwise_distances(&[0, 3]).unwrap(), vec![vec![0, 3], vec![3, 0]]);
        let m = p4.pairwise_distances(&[0, 1, 3]).unwrap();
        assert_eq!((m[0][1], m[0][2], m[1][2]), (1, 3, 2));
        let t = triangle().pairwise_distances(&[0, 1, 2]).unwrap();
        assert!((0..3).all(|i| (0..3).all(|j| t[i][j] == u32::from(i != j))));
    }

    #[test]
    fn pairwise_errors() {
        let p4 = path(4);
        assert!(matches!(p4.pairwise_distances(&[1, 2, 1]), Err(Error::DuplicateNode(1))));
        let split = graph(&[(0, 1), (2, 3)]);
        assert!(matches!(
            split.pairwise_distances(&[0, 1, 3]),
            Err(Error::UnreachablePair(0, 3))
        ));
    }

    #[test]
    fn write_then_reload_is_isomorphic() {
        let g = graph(&[(5, 9), (9, 12), (12, 5), (12, 40)]);
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let h = Graph::from_edges(parse_edge_list(buf.as_slice()).unwrap()).unwrap();
        assert_eq!(g, h);
    }
}
