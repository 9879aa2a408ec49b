use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("edge list line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph is not connected")]
    Disconnected,

    #[error("node {0} has no neighbors")]
    IsolatedNode(usize),

    #[error("exhaustive Cheeger scan supports at most {max} nodes (got {n}); use cheeger_sweep")]
    TooLarge { n: usize, max: usize },

    #[error("eigensolver did not converge (residual {residual:e})")]
    NoConvergence { residual: f64 },

    #[error("trial {trial} hit the step cap of {cap} events with {reached}/{n} nodes reached")]
    StepCap {
        trial: u64,
        cap: u64,
        reached: usize,
        n: usize,
    },

    #[error("row {row} is not stochastic (sum {sum}, min entry {min})")]
    NotStochastic { row: usize, sum: f64, min: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
