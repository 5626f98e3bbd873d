use sdairp_milp::MilpError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("empty arc set")]
    EmptyArcSet,
    #[error("invalid network: {0}")]
    Invariant(String),
    #[error("line {line}: unknown keyword '{keyword}'")]
    UnknownKeyword { line: usize, keyword: String },
    #[error("line {line}: vertex {vertex} outside [1, {n}]")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Milp(#[from] MilpError),
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error("route reconstruction failed: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("reversion rate theta must be positive, got {0}")]
    NonPositiveTheta(f64),
    #[error("volatility sigma must be non-negative, got {0}")]
    NegativeSigma(f64),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum PolicyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("invalid policy configuration: {0}")]
    Config(String),
    #[error("period {t} is beyond the schedule of {len} periods")]
    BeyondSchedule { t: usize, len: usize },
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invalid experiment: {0}")]
    Spec(String),
    #[error("realizations disagree on horizon: {0} vs {1}")]
    HorizonMismatch(usize, usize),
}
