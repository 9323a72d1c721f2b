use super::{StepContext, StepOutcome, StepStrategy};
use crate::FwError;

/// `min{gap / (L·‖x − v‖²), 1}`, the minimizer of the quadratic upper model.
///
/// A zero direction (`x = v`) gives 0. Negative gaps from rounding are
/// treated as 0.
pub fn short_step(gap: f64, dist_sq: f64, smoothness: f64) -> f64 {
    if dist_sq <= 0.0 || gap <= 0.0 {
        return 0.0;
    }
    (gap / (smoothness * dist_sq)).min(1.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShortStep {
    smoothness: f64,
}

impl ShortStep {
    pub fn new(smoothness: f64) -> Result<Self, FwError> {
        if !(smoothness > 0.0 && smoothness.is_finite()) {
            return Err(FwError::InvalidInput(format!(
                "short step needs a positive smoothness constant, got {smoothness}"
            )));
        }
        Ok(Self { smoothness })
    }
}

impl StepStrategy for ShortStep {
    fn label(&self) -> String {
        format!("short:{}", self.smoothness)
    }

    fn step(&mut self, ctx: &StepContext<'_>) -> Result<StepOutcome, FwError> {
        let dist_sq = ctx.x.distance_sq(ctx.vertex);
        Ok(StepOutcome {
            gamma: short_step(ctx.gap, dist_sq, self.smoothness),
            estimate: Some(self.smoothness),
            acceptance: None,
        })
    }

    fn clone_box(&self) -> Box<dyn StepStrategy> {
        Box::new(self.clone())
    }
}
