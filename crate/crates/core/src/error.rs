use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The domain cannot hold a useful node set at the requested spacing.
    #[error("domain too small for spacing {spacing}: {reason}")]
    Sizing { spacing: f64, reason: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("stencil of node {node} is empty")]
    EmptyStencil { node: usize },

    #[error("node {node} has too few neighbours: {found} < {required}")]
    TooFewNeighbours { node: usize, found: usize, required: usize },

    #[error("coincident nodes {node} and {neighbour}")]
    CoincidentNodes { node: usize, neighbour: usize },

    /// Local weight system too ill-conditioned to trust.
    #[error("ill-conditioned local system at node {node}: condition {condition:.3e}")]
    Conditioning { node: usize, condition: f64 },

    #[error("singular system: {0}")]
    Singular(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("stencil mismatch at node {node}")]
    StencilMismatch { node: usize },

    #[error("iterative solver failed after {iterations} iterations (residual {residual:.3e})")]
    IterativeFailure {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },

    #[error("solution diverged at t = {time}")]
    Divergence { time: f64 },

    #[error("dense eigensolve budget exceeded: {n} > {budget}")]
    BudgetExceeded { n: usize, budget: usize },

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
