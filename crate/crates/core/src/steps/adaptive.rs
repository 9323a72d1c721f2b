//! Adaptive short steps with a running smoothness estimate.
//!
//! Each call shrinks the previous estimate by `eta`, then multiplies it by
//! `tau` until the short step it induces passes an inner-product test on the
//! gradient at the trial point. Only gradients are compared, never function
//! values.
//!
//! * [`AcceptanceTest::Gradient`]: `⟨∇f(x⁺), x − v⟩ ≥ 0`. Guaranteed to accept
//!   once the estimate reaches the true smoothness constant `L`.
//! * [`AcceptanceTest::HalfGap`]: `⟨∇f(x⁺), x − v⟩ ≥ ½⟨∇f(x), x − v⟩`.
//!   Guaranteed to accept only from `2L` on.
//!
//! Both tests are evaluated with an additive slack of
//! `accept_tolerance · (1 + ‖∇f(x)‖·‖x − v‖)` so boundary cases where the
//! test value is exactly the threshold accept under rounding.

use super::{AcceptanceCheck, AcceptanceTest, StepContext, StepOutcome, StepStrategy};
use crate::{FwError, Objective, Vector};

#[derive(Clone, Debug, PartialEq)]
pub struct AdaptiveParams {
    /// Shrink factor applied to the previous estimate, `0 < eta ≤ 1`.
    pub eta: f64,
    /// Escalation factor, `tau > 1`.
    pub tau: f64,
    /// Starting estimate. `None` seeds it from a gradient probe on the first step.
    pub initial_estimate: Option<f64>,
    pub max_doublings: usize,
    pub accept_tolerance: f64,
}

impl Default for AdaptiveParams {
    fn default() -> Self {
        Self { eta: 0.9, tau: 2.0, initial_estimate: None, max_doublings: 64, accept_tolerance: 1e-12 }
    }
}

impl AdaptiveParams {
    pub fn validate(&self) -> Result<(), FwError> {
        let ok = self.eta > 0.0
            && self.eta <= 1.0
            && self.tau > 1.0
            && self.tau.is_finite()
            && self.max_doublings >= 1
            && self.accept_tolerance >= 0.0
            && self.initial_estimate.is_none_or(|l| l > 0.0 && l.is_finite());
        if ok {
            Ok(())
        } else {
            Err(FwError::InvalidInput(format!("invalid adaptive parameters {self:?}")))
        }
    }
}

/// Result of one adaptive search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptiveStep {
    pub estimate: f64,
    pub gamma: f64,
    pub test_value: f64,
    pub threshold: f64,
    pub trials: usize,
}

/// One call of the gradient-test adaptive rule.
pub fn adaptive_step(
    objective: &Objective,
    x: &Vector,
    vertex: &Vector,
    gradient_at_x: &Vector,
    params: &AdaptiveParams,
    previous_estimate: f64,
) -> Result<AdaptiveStep, FwError> {
    search(AcceptanceTest::Gradient, objective, x, vertex, gradient_at_x, params, previous_estimate)
}

/// One call of the half-gap variant, which may overestimate `L` by a factor 2.
pub fn adaptive_step_simple(
    objective: &Objective,
    x: &Vector,
    vertex: &Vector,
    gradient_at_x: &Vector,
    params: &AdaptiveParams,
    previous_estimate: f64,
) -> Result<AdaptiveStep, FwError> {
    search(AcceptanceTest::HalfGap, objective, x, vertex, gradient_at_x, params, previous_estimate)
}

fn search(
    test: AcceptanceTest,
    objective: &Objective,
    x: &Vector,
    vertex: &Vector,
    gradient_at_x: &Vector,
    params: &AdaptiveParams,
    previous_estimate: f64,
) -> Result<AdaptiveStep, FwError> {
    params.validate()?;
    if !(previous_estimate > 0.0 && previous_estimate.is_finite()) {
        return Err(FwError::InvalidInput(format!(
            "smoothness estimate must be positive, got {previous_estimate}"
        )));
    }
    let direction = x - vertex;
    let dist_sq = direction.norm_sq();
    let gap = gradient_at_x.dot(&direction);
    let slack = params.accept_tolerance * (1.0 + gradient_at_x.norm() * dist_sq.sqrt());
    if dist_sq == 0.0 || gap <= slack {
        return Ok(AdaptiveStep {
            estimate: previous_estimate,
            gamma: 0.0,
            test_value: 0.0,
            threshold: 0.0,
            trials: 0,
        });
    }
    let required = match test {
        AcceptanceTest::Gradient => 0.0,
        AcceptanceTest::HalfGap => 0.5 * gap,
    };
    let threshold = required - slack;

    let mut estimate = params.eta * previous_estimate;
    for trial in 0..=params.max_doublings {
        let gamma = (gap / (estimate * dist_sq)).min(1.0);
        let trial_point = x.convex_combination(vertex, gamma);
        let test_value = objective.gradient(&trial_point)?.dot(&direction);
        if test_value >= threshold {
            return Ok(AdaptiveStep { estimate, gamma, test_value, threshold, trials: trial + 1 });
        }
        if trial < params.max_doublings {
            estimate *= params.tau;
        }
    }
    Err(FwError::NonAcceptance { escalations: params.max_doublings, last_estimate: estimate })
}

/// Probe estimate `⟨∇f(y) − ∇f(x), y − x⟩ / ‖y − x‖²` at
/// `y = x + 10⁻³(v − x)`, floored at `10⁻⁶`.
fn seed_estimate(ctx: &StepContext<'_>) -> Result<f64, FwError> {
    let probe = ctx.x.convex_combination(ctx.vertex, 1e-3);
    let step = &probe - ctx.x;
    let dist_sq = step.norm_sq();
    if dist_sq == 0.0 {
        return Ok(1e-6);
    }
    let diff = &ctx.objective.gradient(&probe)? - ctx.gradient;
    Ok((diff.dot(&step) / dist_sq).max(1e-6))
}

/// Stateful adaptive rule; the estimate carries over between iterations.
#[derive(Clone, Debug)]
pub struct Adaptive {
    params: AdaptiveParams,
    test: AcceptanceTest,
    estimate: Option<f64>,
}

impl Adaptive {
    pub fn new(params: AdaptiveParams, test: AcceptanceTest) -> Result<Self, FwError> {
        params.validate()?;
        let estimate = params.initial_estimate;
        Ok(Self { params, test, estimate })
    }

    pub fn gradient_test(params: AdaptiveParams) -> Result<Self, FwError> {
        Self::new(params, AcceptanceTest::Gradient)
    }

    pub fn half_gap_test(params: AdaptiveParams) -> Result<Self, FwError> {
        Self::new(params, AcceptanceTest::HalfGap)
    }

    pub fn current_estimate(&self) -> Option<f64> {
        self.estimate
    }
}

impl StepStrategy for Adaptive {
    fn label(&self) -> String {
        match self.test {
            AcceptanceTest::Gradient => "adaptive".into(),
            AcceptanceTest::HalfGap => "adaptive-simple".into(),
        }
    }

    fn requires_convexity(&self) -> bool {
        true
    }

    fn step(&mut self, ctx: &StepContext<'_>) -> Result<StepOutcome, FwError> {
        let previous = match self.estimate {
            Some(l) => l,
            None => seed_estimate(ctx)?,
        };
        let step = search(self.test, ctx.objective, ctx.x, ctx.vertex, ctx.gradient, &self.params, previous)?;
        self.estimate = Some(step.estimate);
        let acceptance = (step.trials > 0).then_some(AcceptanceCheck {
            test: self.test,
            test_value: step.test_value,
            threshold: step.threshold,
            estimate: step.estimate,
            trials: step.trials,
        });
        Ok(StepOutcome { gamma: step.gamma, estimate: Some(step.estimate), acceptance })
    }

    fn clone_box(&self) -> Box<dyn StepStrategy> {
        Box::new(self.clone())
    }
}
