//! The Frank-Wolfe loop.
//!
//! Each iteration makes exactly one LMO call: the vertex it returns gives both
//! the stopping gap and the step direction. Iterates are formed as convex
//! combinations `(1 − γ)x + γv` and audited against the region after every
//! step.

mod active_set;
mod trace;

use std::time::Instant;

use crate::steps::{StepContext, StepStrategy};
use crate::{FwError, Objective, Region, Vector};

pub use active_set::{ActiveSet, Atom};
pub use trace::{read_rows_csv, write_rows_csv, RunTrace, Termination, TraceRow, CSV_HEADER};

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Number of steps allowed; the trace then holds up to `max_iterations + 1` rows.
    pub max_iterations: usize,
    /// Stop once the Frank-Wolfe gap is at most this value.
    pub epsilon: f64,
    pub step_rule: Box<dyn StepStrategy>,
    pub record_active_set: bool,
    pub record_iterates: bool,
    pub feasibility_audit_tol: f64,
    /// Known optimal value; enables the primal gap column.
    pub f_star: Option<f64>,
    /// Record wall-clock time per row. Off gives byte-reproducible traces.
    pub timing: bool,
}

impl SolverConfig {
    pub fn new(step_rule: Box<dyn StepStrategy>) -> Self {
        Self {
            max_iterations: 1000,
            epsilon: 0.0,
            step_rule,
            record_active_set: false,
            record_iterates: false,
            feasibility_audit_tol: 1e-9,
            f_star: None,
            timing: true,
        }
    }

    pub fn max_iterations(mut self, n: usize) -> Self {
        self.max_iterations = n;
        self
    }

    pub fn epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn record_active_set(mut self, on: bool) -> Self {
        self.record_active_set = on;
        self
    }

    pub fn record_iterates(mut self, on: bool) -> Self {
        self.record_iterates = on;
        self
    }

    pub fn f_star(mut self, f_star: f64) -> Self {
        self.f_star = Some(f_star);
        self
    }

    pub fn timing(mut self, on: bool) -> Self {
        self.timing = on;
        self
    }

    pub fn validate(&self) -> Result<(), FwError> {
        if self.max_iterations == 0 {
            return Err(FwError::InvalidInput("max_iterations must be >= 1".into()));
        }
        if self.epsilon.is_nan() || self.epsilon < 0.0 {
            return Err(FwError::InvalidInput("epsilon must be nonnegative".into()));
        }
        if self.feasibility_audit_tol.is_nan() || self.feasibility_audit_tol < 0.0 {
            return Err(FwError::InvalidInput("feasibility tolerance must be nonnegative".into()));
        }
        Ok(())
    }
}

/// What an observer sees at iteration `t`, before any step is taken.
#[derive(Clone, Copy, Debug)]
pub struct IterationView<'a> {
    pub t: usize,
    pub x: &'a Vector,
    pub f: f64,
    pub gradient: &'a Vector,
    pub vertex: &'a Vector,
    pub gap: f64,
    pub active_set: Option<&'a ActiveSet>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// Frank-Wolfe gap `⟨g, x − v⟩` and the vertex `v = lmo(g)` attaining it.
pub fn fw_gap(region: &Region, x: &Vector, gradient: &Vector) -> Result<(f64, Vector), FwError> {
    let vertex = region.lmo(gradient)?;
    let gap = gradient.iter().zip(x.iter()).zip(vertex.iter()).map(|((g, a), b)| g * (a - b)).sum();
    Ok((gap, vertex))
}

/// Prefix minima of the gap column.
pub fn running_min_gap(trace: &RunTrace) -> Vec<f64> {
    running_min(&trace.gaps())
}

pub(crate) fn running_min(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .scan(f64::INFINITY, |m, &g| {
            *m = m.min(g);
            Some(*m)
        })
        .collect()
}

pub fn run(
    region: &Region,
    objective: &Objective,
    x0: &Vector,
    config: &SolverConfig,
) -> Result<RunTrace, FwError> {
    run_with_observer(region, objective, x0, config, |_| Control::Continue)
}

/// Runs the solver, handing every iteration to `observer` before the step.
pub fn run_with_observer<F>(
    region: &Region,
    objective: &Objective,
    x0: &Vector,
    config: &SolverConfig,
    mut observer: F,
) -> Result<RunTrace, FwError>
where
    F: FnMut(&IterationView<'_>) -> Control,
{
    config.validate()?;
    region.validate()?;
    if objective.dim() != region.dim() {
        return Err(FwError::DimensionMismatch { expected: region.dim(), found: objective.dim() });
    }
    if x0.dim() != region.dim() {
        return Err(FwError::DimensionMismatch { expected: region.dim(), found: x0.dim() });
    }
    let violation = region.constraint_violation(x0);
    if violation > config.feasibility_audit_tol {
        return Err(FwError::InfeasibleStart { violation });
    }
    let mut rule = config.step_rule.clone();
    if rule.requires_convexity() && !objective.is_convex() {
        return Err(FwError::NonConvexObjective(rule.label()));
    }

    let start = Instant::now();
    let mut x = x0.clone();
    let mut active_set = config.record_active_set.then(|| ActiveSet::new(x0.clone()));
    let mut iterates = config.record_iterates.then(Vec::new);
    let mut rows = Vec::new();

    let termination = 'outer: {
        for t in 0.. {
            let (f, gradient) = objective.evaluate(&x)?;
            let (gap, vertex) = fw_gap(region, &x, &gradient)?;
            if let Some(list) = iterates.as_mut() {
                list.push(x.clone());
            }
            let mut row = TraceRow {
                t,
                f,
                primal_gap: config.f_star.map(|fs| f - fs),
                fw_gap: gap,
                gamma: None,
                l_estimate: None,
                atom_count: active_set.as_ref().map(ActiveSet::len),
                elapsed_ns: config.timing.then(|| start.elapsed().as_nanos() as u64),
                direction_norm_sq: x.distance_sq(&vertex),
                acceptance: None,
            };

            let view = IterationView {
                t,
                x: &x,
                f,
                gradient: &gradient,
                vertex: &vertex,
                gap,
                active_set: active_set.as_ref(),
            };
            if observer(&view) == Control::Stop {
                rows.push(row);
                break 'outer Termination::Stopped;
            }
            if gap <= config.epsilon {
                rows.push(row);
                break 'outer Termination::GapReached;
            }
            if t == config.max_iterations {
                rows.push(row);
                break 'outer Termination::IterationLimit;
            }

            let ctx = StepContext { t, objective, x: &x, vertex: &vertex, gradient: &gradient, gap };
            let outcome = rule.step(&ctx)?;
            let gamma = outcome.gamma.clamp(0.0, 1.0);
            row.gamma = Some(gamma);
            row.l_estimate = outcome.estimate;
            row.acceptance = outcome.acceptance;
            rows.push(row);
            if gamma == 0.0 {
                break 'outer Termination::Stationary;
            }

            x = x.convex_combination(&vertex, gamma);
            let violation = region.constraint_violation(&x);
            if violation > config.feasibility_audit_tol {
                return Err(FwError::FeasibilityLost { t: t + 1, violation });
            }
            if let Some(set) = active_set.as_mut() {
                set.update(&vertex, gamma);
            }
        }
        unreachable!("the iteration loop only exits through a termination")
    };

    Ok(RunTrace { rule: rule.label(), rows, final_x: x, termination, active_set, iterates })
}
