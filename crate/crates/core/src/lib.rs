//! Arc-inventory routing: network model, MILP formulations, mean-reverting
//! demand simulation, Hermite least-squares regression, dispatch policies
//! and the policy-comparison harness.

pub mod error;
pub mod evaluation;
pub mod formulations;
pub mod graph;
pub mod policy;
pub mod regression;
pub mod stochastic;

pub use error::{EvalError, GraphError, ModelError, PolicyError, SimError};
