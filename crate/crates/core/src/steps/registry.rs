use std::collections::BTreeMap;

use super::{
    Adaptive, AdaptiveParams, AnytimeSqrt, ConstantHorizon, FixedStep, LineSearch, LogShift, OpenLoop,
    ShortStep, StepStrategy,
};
use crate::FwError;

/// Builds a strategy from the text after the `:` in a rule string, if any.
pub type StepFactory = fn(Option<&str>) -> Result<Box<dyn StepStrategy>, FwError>;

struct Entry {
    summary: &'static str,
    factory: StepFactory,
}

/// Name → constructor table for step-size strategies.
///
/// Rule strings have the form `name` or `name:argument`, for example
/// `open2`, `open-ell:4`, `short:2` or `adaptive`.
pub struct StepRegistry {
    entries: BTreeMap<String, Entry>,
}

impl StepRegistry {
    pub fn empty() -> Self {
        Self { entries: BTreeMap::new() }
    }

    /// Registry with every built-in rule.
    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register("open2", "open loop 2/(t+2)", |arg| {
            no_arg("open2", arg)?;
            Ok(Box::new(OpenLoop::new(2)?))
        });
        reg.register("open-ell", "open loop ell/(t+ell); open-ell:<ell>", |arg| {
            Ok(Box::new(OpenLoop::new(parse_arg("open-ell", arg)?)?))
        });
        reg.register("log-shift", "open loop (2+ln(t+1))/(t+2+ln(t+1))", |arg| {
            no_arg("log-shift", arg)?;
            Ok(Box::new(LogShift))
        });
        reg.register("constant", "constant 1/sqrt(T+1); constant:<T>", |arg| {
            Ok(Box::new(ConstantHorizon::new(parse_arg("constant", arg)?)?))
        });
        reg.register("anytime-sqrt", "open loop 1/sqrt(t+1)", |arg| {
            no_arg("anytime-sqrt", arg)?;
            Ok(Box::new(AnytimeSqrt))
        });
        reg.register("fixed", "constant step; fixed:<gamma>", |arg| {
            Ok(Box::new(FixedStep::new(parse_arg("fixed", arg)?)?))
        });
        reg.register("short", "short step with known smoothness; short:<L>", |arg| {
            Ok(Box::new(ShortStep::new(parse_arg("short", arg)?)?))
        });
        reg.register("adaptive", "adaptive short step, gradient acceptance test", |arg| {
            no_arg("adaptive", arg)?;
            Ok(Box::new(Adaptive::gradient_test(AdaptiveParams::default())?))
        });
        reg.register("adaptive-simple", "adaptive short step, half-gap acceptance test", |arg| {
            no_arg("adaptive-simple", arg)?;
            Ok(Box::new(Adaptive::half_gap_test(AdaptiveParams::default())?))
        });
        reg.register("linesearch", "exact line search (constant-Hessian objectives)", |arg| {
            no_arg("linesearch", arg)?;
            Ok(Box::new(LineSearch))
        });
        reg
    }

    /// Adds or replaces a rule.
    pub fn register(&mut self, name: &str, summary: &'static str, factory: StepFactory) {
        self.entries.insert(name.to_owned(), Entry { summary, factory });
    }

    pub fn create(&self, rule: &str) -> Result<Box<dyn StepStrategy>, FwError> {
        let rule = rule.trim();
        let (name, arg) = match rule.split_once(':') {
            Some((name, arg)) => (name, Some(arg)),
            None => (rule, None),
        };
        let entry = self.entries.get(name).ok_or_else(|| FwError::UnknownRule(rule.to_owned()))?;
        (entry.factory)(arg)
    }

    pub fn names(&self) -> impl Iterator<Item = (&str, &'static str)> {
        self.entries.iter().map(|(name, e)| (name.as_str(), e.summary))
    }
}

impl Default for StepRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

fn no_arg(name: &str, arg: Option<&str>) -> Result<(), FwError> {
    match arg {
        None => Ok(()),
        Some(a) => Err(FwError::InvalidInput(format!("rule `{name}` takes no argument, got `{a}`"))),
    }
}

fn parse_arg<T: std::str::FromStr>(name: &str, arg: Option<&str>) -> Result<T, FwError> {
    let arg = arg.ok_or_else(|| FwError::InvalidInput(format!("rule `{name}` needs an argument")))?;
    arg.parse().map_err(|_| FwError::InvalidInput(format!("bad argument `{arg}` for rule `{name}`")))
}
