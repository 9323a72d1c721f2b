use super::{StepContext, StepOutcome, StepStrategy};
use crate::FwError;

/// `γ_t = ℓ / (t + ℓ)`; `ℓ = 2` is the classic `2 / (t + 2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OpenLoop {
    ell: u32,
}

impl OpenLoop {
    pub fn new(ell: u32) -> Result<Self, FwError> {
        if ell == 0 {
            return Err(FwError::InvalidInput("open-loop shift must be >= 1".into()));
        }
        Ok(Self { ell })
    }
}

impl StepStrategy for OpenLoop {
    fn label(&self) -> String {
        if self.ell == 2 {
            "open2".into()
        } else {
            format!("open-ell:{}", self.ell)
        }
    }

    fn schedule(&self, t: usize) -> Option<f64> {
        let ell = f64::from(self.ell);
        Some(ell / (t as f64 + ell))
    }

    fn step(&mut self, ctx: &StepContext<'_>) -> Result<StepOutcome, FwError> {
        Ok(StepOutcome::plain(self.schedule(ctx.t).unwrap_or_default()))
    }

    fn clone_box(&self) -> Box<dyn StepStrategy> {
        Box::new(self.clone())
    }
}

/// `γ_t = (2 + ln(t+1)) / (t + 2 + ln(t+1))`: a shift that grows slowly with `t`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LogShift;

impl StepStrategy for LogShift {
    fn label(&self) -> String {
        "log-shift".into()
    }

    fn schedule(&self, t: usize) -> Option<f64> {
        let t = t as f64;
        let shift = 2.0 + (t + 1.0).ln();
        Some(shift / (t + shift))
    }

    fn step(&mut self, ctx: &StepContext<'_>) -> Result<StepOutcome, FwError> {
        Ok(StepOutcome::plain(self.schedule(ctx.t).unwrap_or_default()))
    }

    fn clone_box(&self) -> Box<dyn StepStrategy> {
        Box::new(self.clone())
    }
}

/// Constant `γ = 1/√(T+1)` for a horizon `T` fixed in advance.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantHorizon {
    horizon: usize,
}

impl ConstantHorizon {
    pub fn new(horizon: usize) -> Result<Self, FwError> {
        if horizon == 0 {
            return Err(FwError::InvalidInput("constant-step horizon must be >= 1".into()));
        }
        Ok(Self { horizon })
    }

    pub fn gamma(&self) -> f64 {
        1.0 / ((self.horizon + 1) as f64).sqrt()
    }
}

impl StepStrategy for ConstantHorizon {
    fn label(&self) -> String {
        format!("constant:{}", self.horizon)
    }

    fn schedule(&self, _t: usize) -> Option<f64> {
        Some(self.gamma())
    }

    fn step(&mut self, _ctx: &StepContext<'_>) -> Result<StepOutcome, FwError> {
        Ok(StepOutcome::plain(self.gamma()))
    }

    fn clone_box(&self) -> Box<dyn StepStrategy> {
        Box::new(self.clone())
    }
}

/// `γ_t = 1/√(t+1)`, the anytime counterpart of [`ConstantHorizon`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AnytimeSqrt;

impl StepStrategy for AnytimeSqrt {
    fn label(&self) -> String {
        "anytime-sqrt".into()
    }

    fn schedule(&self, t: usize) -> Option<f64> {
        Some(1.0 / (t as f64 + 1.0).sqrt())
    }

    fn step(&mut self, ctx: &StepContext<'_>) -> Result<StepOutcome, FwError> {
        Ok(StepOutcome::plain(self.schedule(ctx.t).unwrap_or_default()))
    }

    fn clone_box(&self) -> Box<dyn StepStrategy> {
        Box::new(self.clone())
    }
}

/// A caller-chosen constant `γ ∈ (0, 1]`, e.g. the tuned constant step for
/// nonconvex problems `√(2h₀ / (LD²(T+1)))`.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedStep {
    gamma: f64,
}

impl FixedStep {
    pub fn new(gamma: f64) -> Result<Self, FwError> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(FwError::InvalidInput(format!("fixed step must lie in (0, 1], got {gamma}")));
        }
        Ok(Self { gamma })
    }
}

impl StepStrategy for FixedStep {
    fn label(&self) -> String {
        format!("fixed:{}", self.gamma)
    }

    fn schedule(&self, _t: usize) -> Option<f64> {
        Some(self.gamma)
    }

    fn step(&mut self, _ctx: &StepContext<'_>) -> Result<StepOutcome, FwError> {
        Ok(StepOutcome::plain(self.gamma))
    }

    fn clone_box(&self) -> Box<dyn StepStrategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_loop_two() {
        let rule = OpenLoop::new(2).unwrap();
        assert_eq!(rule.schedule(0), Some(1.0));
        assert_eq!(rule.schedule(2), Some(0.5));
        for t in 0..50 {
            assert_eq!(rule.schedule(t), Some(2.0 / (2.0 + t as f64)));
        }
        assert!(OpenLoop::new(0).is_err());
    }

    #[test]
    fn constant_ignores_t() {
        let rule = ConstantHorizon::new(3).unwrap();
        assert_eq!(rule.schedule(0), Some(0.5));
        assert_eq!(rule.schedule(1000), Some(0.5));
    }

    #[test]
    fn log_shift_and_anytime() {
        assert_eq!(LogShift.schedule(0), Some(1.0));
        let t = 10.0_f64;
        let expected = (2.0 + 11.0_f64.ln()) / (t + 2.0 + 11.0_f64.ln());
        assert_eq!(LogShift.schedule(10), Some(expected));
        assert_eq!(AnytimeSqrt.schedule(3), Some(0.5));
    }

    #[test]
    fn fixed_step_range() {
        assert!(FixedStep::new(0.0).is_err());
        assert!(FixedStep::new(1.5).is_err());
        assert_eq!(FixedStep::new(0.25).unwrap().schedule(7), Some(0.25));
    }
}
