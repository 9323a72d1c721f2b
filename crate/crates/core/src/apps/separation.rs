use std::cell::RefCell;

use serde::Serialize;

use super::{check_epsilon, decomposition, starting_vertex, AppError, Decomposition};
use crate::steps::ShortStep;
use crate::{run_with_observer, Control, Objective, Region, SolverConfig, StepStrategy, Vector};

/// The inequality `⟨normal, x⟩ ≥ offset`, valid for every point of the region.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Hyperplane {
    pub normal: Vector,
    pub offset: f64,
}

impl Hyperplane {
    /// `⟨normal, x⟩ − offset`; nonnegative on the valid side.
    pub fn margin(&self, x: &Vector) -> f64 {
        self.normal.dot(x) - self.offset
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SeparationOutcome {
    /// `⟨normal, point⟩ < offset`: the point is outside the region.
    Hyperplane { hyperplane: Hyperplane, iterations: usize },
    /// The point is within `epsilon` of the region.
    Membership { witness: Decomposition },
}

/// Decides whether `point` is outside `region` or within `epsilon` of it.
///
/// At each iterate the gradient `g = ∇f(x_t)` of `‖x − point‖²` and the
/// vertex `v_t` of the same LMO call give the valid inequality
/// `⟨g, x⟩ ≥ ⟨g, v_t⟩`; it is returned as soon as it cuts off `point`. If
/// instead `‖x_t − point‖² ≤ ε²` first, the decomposition of `x_t` is returned
/// as a membership witness. A point at distance more than `epsilon` is
/// separated within `⌈13.5·D²/ε²⌉` steps.
pub fn separate(
    region: &Region,
    point: &Vector,
    epsilon: f64,
    max_iterations: usize,
) -> Result<SeparationOutcome, AppError> {
    let rule = Box::new(ShortStep::new(2.0)?);
    separate_with(region, point, epsilon, max_iterations, rule)
}

/// [`separate`] with a caller-chosen step rule.
pub fn separate_with(
    region: &Region,
    point: &Vector,
    epsilon: f64,
    max_iterations: usize,
    rule: Box<dyn StepStrategy>,
) -> Result<SeparationOutcome, AppError> {
    check_epsilon(epsilon)?;
    let objective = Objective::distance_squared(point.clone());
    let x0 = starting_vertex(region, point)?;
    let config = SolverConfig::new(rule).max_iterations(max_iterations).record_active_set(true).timing(false);

    let threshold = epsilon * epsilon;
    let outcome = RefCell::new(None);
    let trace = run_with_observer(region, &objective, &x0, &config, |view| {
        let offset = view.gradient.dot(view.vertex);
        if offset > view.gradient.dot(point) {
            let hyperplane = Hyperplane { normal: view.gradient.clone(), offset };
            *outcome.borrow_mut() = Some(SeparationOutcome::Hyperplane { hyperplane, iterations: view.t });
            return Control::Stop;
        }
        if view.f <= threshold {
            let atoms = view.active_set.expect("active set is recorded").atoms();
            let witness = decomposition(atoms, view.x, point, view.t);
            *outcome.borrow_mut() = Some(SeparationOutcome::Membership { witness });
            return Control::Stop;
        }
        Control::Continue
    })?;
    outcome.into_inner().ok_or_else(|| AppError::Undecided {
        iterations: trace.final_row().t,
        distance_estimate: trace.final_row().f.sqrt(),
    })
}
