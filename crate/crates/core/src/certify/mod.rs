//! Numerical certificates for the inequalities behind the Frank-Wolfe
//! analysis.
//!
//! Every check produces a [`CertificateReport`] listing each violated
//! inequality as `lhs ≤ rhs` with its slack `rhs − lhs`. Reports are pure
//! functions of their inputs: sampled checks take an explicit seed.
//!
//! Unless a check says otherwise, `lhs ≤ rhs` is accepted when
//! `lhs ≤ rhs + tol·(1 + max(|lhs|, |rhs|))`.

mod definitions;
mod duality;
mod instances;
mod rates;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{Region, Vector};

pub use definitions::{check_convexity, check_first_order_optimality, check_smoothness};
pub use duality::certify_dual_prices;
pub use instances::{certify_lower_bound, lower_bound_instance, LowerBoundTarget};
pub use rates::{
    certify_adaptive_progress, certify_contraction, certify_dual_rate, certify_fixed_lower,
    certify_gap_chain, certify_monotone, certify_nonconvex, certify_primal_rate, certify_smoothness_progress,
    NonconvexVariant,
};

/// Default absolute/relative tolerance of the inequality checks.
pub const TOLERANCE: f64 = 1e-9;

/// Relative slack under which a dual-rate excess is a warning, not a failure.
pub const DUAL_RATE_WARNING_SLACK: f64 = 0.05;

/// Seed used for sampled checks when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 42;

/// Number of sample pairs drawn by default.
pub const DEFAULT_PAIRS: usize = 100;

/// One failed (or, for warnings, marginal) inequality `lhs ≤ rhs`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub location: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`; negative for a violation.
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateReport {
    pub name: String,
    pub checked_points: usize,
    pub passed: bool,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<Violation>,
    /// Seed of the sampled points, for sampled checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Smallest slack `rhs − lhs` over all checked inequalities.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_slack: Option<f64>,
}

impl CertificateReport {
    /// Largest violation amount `lhs − rhs`, zero when passed.
    pub fn worst_excess(&self) -> f64 {
        self.violations.iter().map(|v| -v.slack).fold(0.0, f64::max)
    }
}

/// Accumulates checks into a report.
pub(crate) struct Audit {
    name: String,
    checked: usize,
    violations: Vec<Violation>,
    warnings: Vec<Violation>,
    seed: Option<u64>,
    min_slack: Option<f64>,
}

impl Audit {
    pub(crate) fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            checked: 0,
            violations: Vec::new(),
            warnings: Vec::new(),
            seed: None,
            min_slack: None,
        }
    }

    pub(crate) fn seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    fn record(&mut self, lhs: f64, rhs: f64) {
        self.checked += 1;
        let slack = rhs - lhs;
        self.min_slack = Some(self.min_slack.map_or(slack, |m: f64| m.min(slack)));
    }

    /// `lhs ≤ rhs` with the mixed tolerance `tol·(1 + max(|lhs|, |rhs|))`.
    pub(crate) fn le(&mut self, location: impl FnOnce() -> String, lhs: f64, rhs: f64, tol: f64) {
        self.le_within(location, lhs, rhs, tol * (1.0 + lhs.abs().max(rhs.abs())));
    }

    /// `lhs ≤ rhs + allowance`; NaN on either side is a violation.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub(crate) fn le_within(
        &mut self,
        location: impl FnOnce() -> String,
        lhs: f64,
        rhs: f64,
        allowance: f64,
    ) {
        self.record(lhs, rhs);
        if !(lhs <= rhs + allowance) {
            self.violations.push(Violation { location: location(), lhs, rhs, slack: rhs - lhs });
        }
    }

    /// `|lhs − rhs| ≤ tol`, recorded as the one-sided check that failed.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub(crate) fn eq_within(&mut self, location: impl FnOnce() -> String, lhs: f64, rhs: f64, tol: f64) {
        self.record(lhs, rhs);
        if !((lhs - rhs).abs() <= tol) {
            self.violations.push(Violation { location: location(), lhs, rhs, slack: -(lhs - rhs).abs() });
        }
    }

    /// `lhs ≤ rhs` with excesses up to `rel·rhs` reported as warnings.
    pub(crate) fn le_or_warn(&mut self, location: impl FnOnce() -> String, lhs: f64, rhs: f64, rel: f64) {
        self.record(lhs, rhs);
        if lhs <= rhs {
            return;
        }
        let v = Violation { location: location(), lhs, rhs, slack: rhs - lhs };
        if lhs <= rhs * (1.0 + rel) {
            self.warnings.push(v);
        } else {
            self.violations.push(v);
        }
    }

    pub(crate) fn finish(self) -> CertificateReport {
        CertificateReport {
            name: self.name,
            checked_points: self.checked,
            passed: self.violations.is_empty(),
            violations: self.violations,
            warnings: self.warnings,
            seed: self.seed,
            min_slack: self.min_slack,
        }
    }
}

/// Point pairs for the definition checks.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplePairs {
    pub pairs: Vec<(Vector, Vector)>,
    /// Seed the pairs were drawn with, if they were drawn.
    pub seed: Option<u64>,
}

impl SamplePairs {
    pub fn from_pairs(pairs: Vec<(Vector, Vector)>) -> Self {
        Self { pairs, seed: None }
    }
}

/// `count` pairs of independent feasible points, reproducible from `seed`.
pub fn sample_pairs(region: &Region, count: usize, seed: u64) -> SamplePairs {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = (0..count).map(|_| (region.sample_point(&mut rng), region.sample_point(&mut rng))).collect();
    SamplePairs { pairs, seed: Some(seed) }
}

/// `count` feasible points, reproducible from `seed`.
pub fn sample_points(region: &Region, count: usize, seed: u64) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| region.sample_point(&mut rng)).collect()
}
