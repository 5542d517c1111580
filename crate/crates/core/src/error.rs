use crate::{NodeId, Weight};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: negative or oversized arc weight {weight}")]
    Weight { line: usize, weight: i64 },

    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: u64, n: usize },

    #[error("weights too large: longest simple path may reach the infinity sentinel")]
    WeightOverflow,

    #[error("invalid permutation: {0}")]
    Permutation(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unknown renumbering strategy `{0}`")]
    UnknownStrategy(String),

    #[error("bad binary data: {0}")]
    Format(String),

    #[error("verification failed for ({s}, {t}): expected {expected}, got {got}")]
    Mismatch {
        s: NodeId,
        t: NodeId,
        expected: Weight,
        got: Weight,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub(crate) fn check_node(node: NodeId, n: usize) -> Result<()> {
    if (node as usize) < n {
        Ok(())
    } else {
        Err(Error::NodeOutOfRange { node: node as u64, n })
    }
}
