use std::cell::RefCell;

use super::{check_epsilon, decomposition, starting_vertex, AppError, Decomposition};
use crate::steps::ShortStep;
use crate::{
    run_with_observer, Control, FwError, Objective, Region, SolverConfig, StepStrategy, Termination, Vector,
};

/// Approximates `target ∈ region` within `epsilon` by a convex combination of
/// few vertices, using the short step with `L = 2`.
///
/// Stops as soon as `‖x_t − target‖² ≤ ε²`. The cardinality is at most
/// `t + 1`, and the run needs at most `⌈4D²/ε²⌉` steps.
pub fn approx_caratheodory(
    region: &Region,
    target: &Vector,
    epsilon: f64,
    max_iterations: usize,
) -> Result<Decomposition, AppError> {
    let rule = Box::new(ShortStep::new(2.0)?);
    approx_caratheodory_with(region, target, epsilon, max_iterations, rule)
}

/// [`approx_caratheodory`] with a caller-chosen step rule.
pub fn approx_caratheodory_with(
    region: &Region,
    target: &Vector,
    epsilon: f64,
    max_iterations: usize,
    rule: Box<dyn StepStrategy>,
) -> Result<Decomposition, AppError> {
    check_epsilon(epsilon)?;
    let violation = region.constraint_violation(target);
    if violation > 1e-9 {
        return Err(FwError::InvalidInput(format!("target lies outside the region by {violation}")).into());
    }
    let objective = Objective::distance_squared(target.clone());
    let x0 = starting_vertex(region, target)?;
    let config = SolverConfig::new(rule).max_iterations(max_iterations).record_active_set(true).timing(false);

    let threshold = epsilon * epsilon;
    let found = RefCell::new(None);
    let trace = run_with_observer(region, &objective, &x0, &config, |view| {
        if view.f <= threshold {
            let atoms = view.active_set.expect("active set is recorded").atoms();
            *found.borrow_mut() = Some(decomposition(atoms, view.x, target, view.t));
            Control::Stop
        } else {
            Control::Continue
        }
    })?;
    if let Some(done) = found.into_inner() {
        return Ok(done);
    }
    let atoms = trace.active_set.as_ref().expect("active set is recorded").atoms();
    let last = decomposition(atoms, &trace.final_x, target, trace.final_row().t);
    debug_assert_ne!(trace.termination, Termination::Stopped);
    Err(AppError::Partial { decomposition: Box::new(last) })
}
