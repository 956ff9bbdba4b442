//! Workload generators shared by the criterion benches.

use geocommittee::{Graph, Instance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Connected random graph: a random spanning tree plus `extra_edges` uniform
/// chords.
pub fn random_connected_graph(nodes: u64, extra_edges: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(u64, u64)> = (1..nodes).map(|v| (rng.gen_range(0..v), v)).collect();
    for _ in 0..extra_edges {
        edges.push((rng.gen_range(0..nodes), rng.gen_range(0..nodes)));
    }
    Graph::from_edges(edges).expect("spanning tree has edges")
}

/// Sparse "social-like" instance: tree plus a few chords per node.
pub fn social_instance(nodes: u64, seed: u64) -> Instance {
    let g = random_connected_graph(nodes, 2 * nodes as usize, seed);
    Instance::new(g).expect("spanning tree keeps the graph connected")
}
