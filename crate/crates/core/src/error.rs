use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("graph must have at least one node")]
    EmptyGraph,
    #[error("edge ({0}, {1}) has an endpoint outside 0..{2}")]
    EndpointOutOfRange(usize, usize, usize),
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("invalid size n={n} for {kind} graph: {reason}")]
    InvalidSize {
        kind: &'static str,
        n: usize,
        reason: String,
    },
    #[error(
        "degree target {target} unreachable for node 1 of a {n}-node graph (need 2 <= d <= n-1)"
    )]
    UnreachableDegree { n: usize, target: usize },
    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("time must be finite and nonnegative, got {0}")]
    NegativeTime(f64),
    #[error("time must be finite, got {0}")]
    NonFiniteTime(f64),
    #[error("eigensolver did not converge")]
    EigenNonConvergence,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("probability {value} at site {site} is negative beyond roundoff")]
    NegativeProbability { site: usize, value: f64 },
    #[error("time grid: {0}")]
    InvalidGrid(String),
    #[error("edge list parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("unknown graph kind `{0}`")]
    UnknownKind(String),
}

pub type Result<T> = std::result::Result<T, Error>;
