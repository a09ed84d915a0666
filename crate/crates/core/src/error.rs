use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on node {node}")]
    SelfLoop { node: usize },
    #[error("parallel edge between {u} and {v}")]
    ParallelEdge { u: usize, v: usize },
    #[error("edge ({u}, {v}) references a node outside 0..{nodes}")]
    DanglingEndpoint { u: usize, v: usize, nodes: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no edges")]
    Edgeless,
    #[error("malformed DFS code: {0}")]
    MalformedCode(String),
}

/// Error from the line-based graph or model readers. `line` is 1-based.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self { line, message: message.into() }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("unsupported model format header {found:?}")]
    Version { found: String },
    #[error("model file truncated: {0}")]
    Truncated(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("invalid hyperparameters: {0}")]
    InvalidParams(String),
    #[error("response {value} of graph {index} is not a class label in {{-1, +1}}")]
    InvalidLabel { index: usize, value: f64 },
    #[error("need at least 2 training graphs, got {0}")]
    TooFewGraphs(usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("class {label} has {count} members, fewer than {folds} folds")]
    ClassTooSmall { label: f64, count: usize, folds: usize },
    #[error("need at least 2 folds, got {0}")]
    TooFewFolds(usize),
    #[error("indicator matrix needs {needed} bytes, budget is {budget} bytes ({width} patterns so far)")]
    BudgetExceeded { needed: usize, budget: usize, width: usize },
    #[error("max_edges must be finite for the enumerate-and-learn baseline")]
    UnboundedBaseline,
    #[error(transparent)]
    Fit(#[from] FitError),
}
