//! Projection-free optimization over compact convex sets.
//!
//! The crate is organised around the two oracles a Frank-Wolfe method needs:
//! a first-order oracle for the objective ([`Objective`]) and a linear
//! minimization oracle for the feasible region ([`Region`]). Step-size
//! strategies live behind the [`StepStrategy`] trait and are looked up by
//! name through a [`StepRegistry`], so experiments can pick them at runtime.
//!
//! On top of the solver sit the [`certify`] checks, which audit traces and
//! objectives against the known convergence bounds and inequalities, and the
//! [`apps`] module with sparse convex decomposition and separating-hyperplane
//! generation.

pub mod apps;
pub mod certify;
mod error;
pub mod objective;
pub mod region;
pub mod solver;
pub mod steps;
mod vector;

pub use error::FwError;
pub use objective::{FirstOrderOracle, Objective, ObjectiveKind, SymmetricMatrix};
pub use region::{DualPrices, Region};
pub use solver::{
    fw_gap, run, run_with_observer, running_min_gap, ActiveSet, Atom, Control, IterationView, RunTrace,
    SolverConfig, Termination, TraceRow,
};
pub use steps::{
    AcceptanceCheck, AcceptanceTest, AdaptiveParams, StepContext, StepOutcome, StepRegistry, StepStrategy,
};
pub use vector::Vector;

pub type Result<T, E = FwError> = std::result::Result<T, E>;
