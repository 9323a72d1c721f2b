//! Applications of the Frank-Wolfe loop to the geometry of the region:
//! sparse convex decompositions of a point and separating hyperplanes for
//! points outside the region.
//!
//! Both run the solver on `f(x) = ‖x − x̃‖²`, starting from the vertex
//! `lmo(c − x̃)` where `c` is the center of the region, so that the first
//! atom is the vertex most aligned with the target. The default step rule is
//! the short step with `L = 2`, which is exact line search for this
//! objective.

mod caratheodory;
mod separation;

use serde::Serialize;
use thiserror::Error;

use crate::{Atom, FwError, Region, Vector};

pub use caratheodory::{approx_caratheodory, approx_caratheodory_with};
pub use separation::{separate, separate_with, Hyperplane, SeparationOutcome};

/// A point written as a convex combination of vertices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decomposition {
    pub atoms: Vec<Atom>,
    pub approximant: Vector,
    /// `‖approximant − target‖`
    pub error: f64,
    pub cardinality: usize,
    /// Frank-Wolfe steps taken.
    pub iterations: usize,
}

#[derive(Debug, Error)]
pub enum AppError {
    #[error(transparent)]
    Solver(#[from] FwError),
    #[error("accuracy not reached after {} iterations (error {})", .decomposition.iterations, .decomposition.error)]
    Partial { decomposition: Box<Decomposition> },
    #[error("separation undecided after {iterations} iterations (distance estimate {distance_estimate})")]
    Undecided { iterations: usize, distance_estimate: f64 },
}

fn check_epsilon(epsilon: f64) -> Result<(), FwError> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(FwError::InvalidInput(format!("epsilon must be positive, got {epsilon}")))
    }
}

fn starting_vertex(region: &Region, target: &Vector) -> Result<Vector, FwError> {
    region.lmo(&(&region.center() - target))
}

fn decomposition(atoms: &[Atom], x: &Vector, target: &Vector, iterations: usize) -> Decomposition {
    let atoms: Vec<Atom> = atoms.iter().filter(|a| a.weight > 0.0).cloned().collect();
    Decomposition {
        cardinality: atoms.len(),
        atoms,
        approximant: x.clone(),
        error: x.distance(target),
        iterations,
    }
}
