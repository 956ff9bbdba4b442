use std::path::PathBuf;

use crate::graph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph has no edges after filtering")]
    EmptyGraph,
    #[error("node {node} is out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { node: NodeId, node_count: usize },
    #[error("node {0} appears more than once")]
    DuplicateNode(NodeId),
    #[error("nodes {0} and {1} are not connected")]
    UnreachablePair(NodeId, NodeId),
    #[error("graph is disconnected ({components} components); load it with the largest-component option")]
    Disconnected { components: usize },
    #[error("graph diameter is zero")]
    ZeroDiameter,
    #[error("committee size {k} is invalid: {reason}")]
    InvalidCommitteeSize { k: usize, reason: String },
    #[error("reward is undefined for a zero starting fitness")]
    ZeroFitness,
    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),
    #[error("arm {arm} out of range ({arms} arms)")]
    ArmOutOfRange { arm: usize, arms: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("inconsistent traces: {0}")]
    InconsistentTraces(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(message: impl Into<String>) -> Self {
        Error::InvalidConfig(message.into())
    }
}
