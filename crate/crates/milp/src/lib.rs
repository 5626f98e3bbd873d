//! Exact solver for small mixed binary linear programs.
//!
//! [`solve_lp`] runs a dense bounded-variable simplex on the relaxation,
//! [`solve_mip`] wraps it in best-first branch-and-bound, and
//! [`enumerate_oracle`] is an exhaustive reference used to cross-check both.

mod branch;
mod error;
mod model;
mod oracle;
mod simplex;

pub use branch::{solve_lp, solve_mip, MipSolution, NodeRecord, SolveStatus, SolverConfig};
pub use error::MilpError;
pub use model::{Constraint, LinearModel, ObjSense, RowSense, VarId, VarKind, Variable};
pub use oracle::{enumerate_oracle, MAX_ENUMERATED_BINARIES};
