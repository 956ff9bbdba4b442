use crate::distance::{DistanceMatrix, DistanceOracle};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::independence::{self, Committee, FitnessValue, Scored};

/// A connected graph prepared for solving: diameter known and, when the graph
/// is small enough, every distance cached.
#[derive(Debug, Clone)]
pub struct Instance {
    graph: Graph,
    matrix: Option<DistanceMatrix>,
    diameter: u32,
}

impl Instance {
    pub fn new(graph: Graph) -> Result<Self> {
        let (_, components) = graph.connected_components();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        let matrix = DistanceMatrix::build(&graph);
        let diameter = match &matrix {
            Some(m) => m.diameter(),
            None => crate::metrics::global_metrics(&graph)?.diameter,
        };
        if diameter == 0 {
            return Err(Error::ZeroDiameter);
        }
        Ok(Instance {
            graph,
            matrix,
            diameter,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn diameter(&self) -> u32 {
        self.diameter
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn fitness(&self, committee: &Committee) -> Result<FitnessValue> {
        independence::fitness(self, self.diameter, committee)
    }

    pub fn score(&self, committee: Committee) -> Result<Scored> {
        independence::score(self, self.diameter, committee)
    }
}

impl DistanceOracle for Instance {
    fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    fn member_distances(&self, members: &[NodeId]) -> Result<Vec<u32>> {
        match &self.matrix {
            Some(m) => m.member_distances(members),
            None => self.graph.member_distances(members),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{graph, path};

    #[test]
    fn diameter_and_fitness() {
        let inst = Instance::new(path(5)).unwrap();
        assert_eq!(inst.diameter(), 4);
        let f = inst.fitness(&Committee::new(vec![0, 4], 5).unwrap()).unwrap();
        assert_eq!(f.value, 1.0);
    }

    #[test]
    fn rejects_disconnected() {
        assert!(matches!(
            Instance::new(graph(&[(0, 1), (2, 3)])),
            Err(Error::Disconnected { components: 2 })
        ));
    }
}
