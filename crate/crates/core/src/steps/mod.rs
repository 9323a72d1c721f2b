//! Step-size strategies.
//!
//! Each strategy implements [`StepStrategy`]. Open-loop rules depend only on
//! the iteration counter and expose it through [`StepStrategy::schedule`];
//! the others look at the current iterate, the Frank-Wolfe vertex and the
//! gradient. Strategies are created by name through [`StepRegistry`].

mod adaptive;
mod line_search;
mod open_loop;
mod registry;
mod short;

use std::fmt;

use crate::{FwError, Objective, Vector};

pub use adaptive::{adaptive_step, adaptive_step_simple, Adaptive, AdaptiveParams, AdaptiveStep};
pub use line_search::{exact_line_search_quadratic, LineSearch};
pub use open_loop::{AnytimeSqrt, ConstantHorizon, FixedStep, LogShift, OpenLoop};
pub use registry::{StepFactory, StepRegistry};
pub use short::{short_step, ShortStep};

/// Everything a strategy may inspect when choosing `γ_t`.
#[derive(Clone, Copy, Debug)]
pub struct StepContext<'a> {
    pub t: usize,
    pub objective: &'a Objective,
    pub x: &'a Vector,
    pub vertex: &'a Vector,
    pub gradient: &'a Vector,
    /// `⟨∇f(x), x − v⟩`
    pub gap: f64,
}

/// Which inequality an adaptive strategy used to accept its estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AcceptanceTest {
    /// `⟨∇f(x⁺), x − v⟩ ≥ 0`
    Gradient,
    /// `⟨∇f(x⁺), x − v⟩ ≥ ½⟨∇f(x), x − v⟩`
    HalfGap,
}

/// Record of an accepted adaptive step, kept in the trace for auditing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcceptanceCheck {
    pub test: AcceptanceTest,
    /// `⟨∇f(x⁺), x − v⟩` at the accepted step.
    pub test_value: f64,
    /// Right-hand side the test value was compared against, tolerance included.
    pub threshold: f64,
    /// Accepted smoothness estimate `M`.
    pub estimate: f64,
    /// Number of estimates tried, including the accepted one.
    pub trials: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepOutcome {
    pub gamma: f64,
    /// Smoothness constant (declared or estimated) behind this step, if any.
    pub estimate: Option<f64>,
    pub acceptance: Option<AcceptanceCheck>,
}

impl StepOutcome {
    pub fn plain(gamma: f64) -> Self {
        Self { gamma, estimate: None, acceptance: None }
    }
}

/// A step-size rule. Stateful rules (the adaptive ones) carry their running
/// estimate between calls, so one instance belongs to one solver run.
pub trait StepStrategy: Send + Sync + fmt::Debug {
    /// Name in registry syntax, e.g. `open-ell:4` or `short:2`.
    fn label(&self) -> String;

    /// `γ_t` for rules that depend on `t` alone.
    fn schedule(&self, _t: usize) -> Option<f64> {
        None
    }

    /// Rules whose guarantees need convexity refuse to run otherwise.
    fn requires_convexity(&self) -> bool {
        false
    }

    fn step(&mut self, ctx: &StepContext<'_>) -> Result<StepOutcome, FwError>;

    fn clone_box(&self) -> Box<dyn StepStrategy>;
}

impl Clone for Box<dyn StepStrategy> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

/// Open-loop value of `rule` at iteration `t`; data-dependent rules error.
pub fn schedule_gamma(rule: &dyn StepStrategy, t: usize) -> Result<f64, FwError> {
    rule.schedule(t).ok_or_else(|| FwError::WrongRule(rule.label()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_rejects_data_dependent_rules() {
        let short = ShortStep::new(2.0).unwrap();
        assert_eq!(schedule_gamma(&short, 0), Err(FwError::WrongRule("short:2".into())));
        let open = OpenLoop::new(2).unwrap();
        assert_eq!(schedule_gamma(&open, 0), Ok(1.0));
    }
}
