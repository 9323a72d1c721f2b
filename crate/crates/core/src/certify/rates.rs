//! Trace-level certificates: convergence rates and per-step progress bounds.

use super::{Audit, CertificateReport, DUAL_RATE_WARNING_SLACK, TOLERANCE};
use crate::solver::{fw_gap, running_min};
use crate::steps::AcceptanceTest;
use crate::{FwError, Objective, Region, RunTrace, Vector};

fn check_constants(smoothness: f64, diameter: f64) -> Result<(), FwError> {
    if smoothness >= 0.0 && smoothness.is_finite() && diameter >= 0.0 && diameter.is_finite() {
        Ok(())
    } else {
        Err(FwError::InvalidInput(format!(
            "smoothness and diameter must be finite and nonnegative, got L = {smoothness}, D = {diameter}"
        )))
    }
}

/// `f(x_t) − f* ≤ 2LD²/(t+2)` for every `t ≥ 1`, with relative tolerance
/// `1e-9` on the bound. The `t = 0` row is not covered by the rate.
pub fn certify_primal_rate(
    trace: &RunTrace,
    smoothness: f64,
    diameter: f64,
    f_star: f64,
) -> Result<CertificateReport, FwError> {
    check_constants(smoothness, diameter)?;
    let c = 2.0 * smoothness * diameter * diameter;
    let mut audit = Audit::new("primal-rate");
    for row in trace.rows.iter().skip(1) {
        let bound = c / (row.t as f64 + 2.0);
        audit.le_within(|| format!("t={}", row.t), row.f - f_star, bound, TOLERANCE * bound);
    }
    Ok(audit.finish())
}

/// `min_{τ ≤ t} gap_τ ≤ 6.75·LD²/(t+2)` for every `t`. Excesses of at most
/// 5% of the bound are reported as warnings.
pub fn certify_dual_rate(
    trace: &RunTrace,
    smoothness: f64,
    diameter: f64,
) -> Result<CertificateReport, FwError> {
    check_constants(smoothness, diameter)?;
    let c = 6.75 * smoothness * diameter * diameter;
    let mut audit = Audit::new("dual-rate");
    for (row, min_gap) in trace.rows.iter().zip(running_min(&trace.gaps())) {
        let bound = c / (row.t as f64 + 2.0);
        audit.le_or_warn(|| format!("t={}", row.t), min_gap, bound, DUAL_RATE_WARNING_SLACK);
    }
    Ok(audit.finish())
}

/// `h_{t+1} ≤ (1 − γ_t)h_t + γ_t²·LD²/2` on every step, absolute tolerance
/// `1e-9`.
pub fn certify_contraction(
    trace: &RunTrace,
    smoothness: f64,
    diameter: f64,
    f_star: f64,
) -> Result<CertificateReport, FwError> {
    check_constants(smoothness, diameter)?;
    let mut audit = Audit::new("contraction");
    for pair in trace.rows.windows(2) {
        let (now, next) = (&pair[0], &pair[1]);
        let Some(gamma) = now.gamma else { continue };
        let bound = (1.0 - gamma) * (now.f - f_star) + 0.5 * gamma * gamma * smoothness * diameter * diameter;
        audit.le_within(|| format!("t={}", now.t), next.f - f_star, bound, TOLERANCE);
    }
    Ok(audit.finish())
}

/// `f(x_t) − f(x_{t+1}) ≥ γ_t·gap_t − γ_t²(L/2)‖x_t − v_t‖²` on every step,
/// absolute tolerance `1e-9`.
///
/// Traces read back from CSV do not carry `‖x_t − v_t‖²`; for those rows the
/// weaker bound with `D²` is checked instead.
pub fn certify_smoothness_progress(
    trace: &RunTrace,
    smoothness: f64,
    diameter: f64,
) -> Result<CertificateReport, FwError> {
    check_constants(smoothness, diameter)?;
    let mut audit = Audit::new("smoothness-progress");
    for pair in trace.rows.windows(2) {
        let (now, next) = (&pair[0], &pair[1]);
        let Some(gamma) = now.gamma else { continue };
        let dist_sq =
            if now.direction_norm_sq.is_finite() { now.direction_norm_sq } else { diameter * diameter };
        let progress = gamma * now.fw_gap - 0.5 * gamma * gamma * smoothness * dist_sq;
        audit.le_within(|| format!("t={}", now.t), progress, now.f - next.f, TOLERANCE);
    }
    Ok(audit.finish())
}

/// Progress guarantees of accepted adaptive steps, absolute tolerance `1e-9`.
///
/// * gradient test: `f(x_t) − f(x_{t+1}) ≥ (gap² + test²)/(2·max{L, M}·‖x_t − v_t‖²)`,
///   where a truncated step (`γ = 1`) is evaluated with the largest estimate
///   that yields it, `M = gap/‖x_t − v_t‖²`; when that estimate is at least
///   `L` the step also makes progress `gap/2 + test²/(2·gap)`.
/// * half-gap test: `f(x_t) − f(x_{t+1}) ≥ γ_t·gap/2`.
///
/// Also checks that each recorded test value meets its recorded threshold.
pub fn certify_adaptive_progress(trace: &RunTrace, smoothness: f64) -> Result<CertificateReport, FwError> {
    check_constants(smoothness, 0.0)?;
    let mut audit = Audit::new("adaptive-progress");
    for pair in trace.rows.windows(2) {
        let (now, next) = (&pair[0], &pair[1]);
        let (Some(gamma), Some(check)) = (now.gamma, now.acceptance) else { continue };
        if !now.direction_norm_sq.is_finite() {
            return Err(FwError::InvalidInput(
                "adaptive progress needs in-memory traces with direction norms".into(),
            ));
        }
        let t = now.t;
        audit.le_within(|| format!("t={t}: acceptance"), check.threshold, check.test_value, 0.0);
        let decrease = now.f - next.f;
        let (gap, test, d2) = (now.fw_gap, check.test_value, now.direction_norm_sq);
        match check.test {
            AcceptanceTest::Gradient => {
                let m = if gamma < 1.0 { check.estimate } else { gap / d2 };
                let bound = (gap * gap + test * test) / (2.0 * smoothness.max(m) * d2);
                audit.le_within(|| format!("t={t}: gradient test progress"), bound, decrease, TOLERANCE);
                if gamma == 1.0 && m >= smoothness {
                    let bound = 0.5 * gap + test * test / (2.0 * gap);
                    audit.le_within(|| format!("t={t}: full step progress"), bound, decrease, TOLERANCE);
                }
            }
            AcceptanceTest::HalfGap => {
                let bound = 0.5 * gamma * gap;
                audit.le_within(|| format!("t={t}: half-gap progress"), bound, decrease, TOLERANCE);
            }
        }
    }
    Ok(audit.finish())
}

/// `f(x_{t+1}) ≤ f(x_t) + 1e-9` on every step.
pub fn certify_monotone(trace: &RunTrace) -> CertificateReport {
    let mut audit = Audit::new("monotone");
    for pair in trace.rows.windows(2) {
        audit.le_within(|| format!("t={}", pair[0].t), pair[1].f, pair[0].f, TOLERANCE);
    }
    audit.finish()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonconvexVariant {
    /// Step `γ = 1/√(T+1)`.
    Arithmetic,
    /// Step `γ = √(2h₀/(LD²(T+1)))`.
    Geometric,
}

impl NonconvexVariant {
    /// The constant step the variant's bound is stated for.
    pub fn step_size(self, h0: f64, smoothness: f64, diameter: f64, horizon: usize) -> f64 {
        let n = horizon as f64 + 1.0;
        match self {
            Self::Arithmetic => 1.0 / n.sqrt(),
            Self::Geometric => (2.0 * h0 / (smoothness * diameter * diameter * n)).sqrt(),
        }
    }
}

/// Bounds on the gaps of the first `T+1` iterates of a constant-step run,
/// absolute tolerance `1e-9`:
///
/// * always `G_T = min_{t ≤ T} gap_t ≤ max{2h₀, LD²}/√(T+1)`;
/// * arithmetic: the mean gap is at most `(2h₀ + LD²)/(2√(T+1))`;
/// * geometric: `G_T` and the mean gap are at most `√(2h₀LD²/(T+1))`.
pub fn certify_nonconvex(
    trace: &RunTrace,
    h0: f64,
    smoothness: f64,
    diameter: f64,
    horizon: usize,
    variant: NonconvexVariant,
) -> Result<CertificateReport, FwError> {
    check_constants(smoothness, diameter)?;
    if !(h0 >= 0.0 && h0.is_finite()) {
        return Err(FwError::InvalidInput(format!("h0 must be finite and nonnegative, got {h0}")));
    }
    if trace.rows.len() < horizon + 1 {
        return Err(FwError::InvalidInput(format!(
            "trace has {} rows, the horizon T = {horizon} needs {}",
            trace.rows.len(),
            horizon + 1
        )));
    }
    let gaps = &trace.gaps()[..=horizon];
    let n = horizon as f64 + 1.0;
    let ld2 = smoothness * diameter * diameter;
    let g_min = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = gaps.iter().sum::<f64>() / n;

    let name = match variant {
        NonconvexVariant::Arithmetic => "nonconvex-arithmetic",
        NonconvexVariant::Geometric => "nonconvex-geometric",
    };
    let mut audit = Audit::new(name);
    audit.le_within(|| "min gap, max bound".into(), g_min, (2.0 * h0).max(ld2) / n.sqrt(), TOLERANCE);
    match variant {
        NonconvexVariant::Arithmetic => {
            let bound = (2.0 * h0 + ld2) / (2.0 * n.sqrt());
            audit.le_within(|| "mean gap, arithmetic bound".into(), mean, bound, TOLERANCE);
        }
        NonconvexVariant::Geometric => {
            let bound = (2.0 * h0 * ld2 / n).sqrt();
            audit.le_within(|| "min gap, geometric bound".into(), g_min, bound, TOLERANCE);
            audit.le_within(|| "mean gap, geometric bound".into(), mean, bound, TOLERANCE);
        }
    }
    Ok(audit.finish())
}

fn recorded_iterates(trace: &RunTrace) -> Result<&[Vector], FwError> {
    trace
        .iterates
        .as_deref()
        .ok_or_else(|| FwError::InvalidInput("certificate needs a trace with recorded iterates".into()))
}

/// `f(x_t) − f(x*) ≥ Π_{τ=1}^{t−1}(1 − γ_τ)·⟨∇f(x*), x₁ − x*⟩` for every
/// `t ≥ 1`, absolute tolerance `1e-9`. The product is empty at `t = 1`.
///
/// `x_star` must be first-order optimal for `region`; the trace must carry
/// its iterates.
pub fn certify_fixed_lower(
    trace: &RunTrace,
    region: &Region,
    obj: &Objective,
    x_star: &Vector,
) -> Result<CertificateReport, FwError> {
    let (f_star, g_star) = obj.evaluate(x_star)?;
    let (gap_star, _) = fw_gap(region, x_star, &g_star)?;
    if gap_star > TOLERANCE * (1.0 + g_star.norm()) {
        return Err(FwError::InvalidInput(format!(
            "x* is not first-order optimal: Frank-Wolfe gap {gap_star}"
        )));
    }
    let mut audit = Audit::new("fixed-lower");
    if trace.rows.len() < 2 {
        return Ok(audit.finish());
    }
    let iterates = recorded_iterates(trace)?;
    let scale = g_star.dot(&(&iterates[1] - x_star));
    let mut product = 1.0;
    for (t, row) in trace.rows.iter().enumerate().skip(1) {
        if t >= 2 {
            let gamma = trace.rows[t - 1].gamma.expect("every non-final row has a step");
            product *= 1.0 - gamma;
        }
        audit.le_within(|| format!("t={t}"), product * scale, row.f - f_star, TOLERANCE);
    }
    Ok(audit.finish())
}

/// `f(x_t) − f(x*) ≤ ⟨∇f(x_t), x_t − x*⟩ ≤ gap_t` at every iterate, absolute
/// tolerance `1e-9`. Needs recorded iterates.
pub fn certify_gap_chain(
    trace: &RunTrace,
    obj: &Objective,
    x_star: &Vector,
) -> Result<CertificateReport, FwError> {
    let f_star = obj.value(x_star)?;
    let iterates = recorded_iterates(trace)?;
    let mut audit = Audit::new("gap-chain");
    for (row, x) in trace.rows.iter().zip(iterates) {
        let dual = obj.gradient(x)?.dot(&(x - x_star));
        audit.le_within(|| format!("t={}: primal <= dual", row.t), row.f - f_star, dual, TOLERANCE);
        audit.le_within(|| format!("t={}: dual <= fw", row.t), dual, row.fw_gap, TOLERANCE);
    }
    Ok(audit.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steps::{AnytimeSqrt, FixedStep, OpenLoop, ShortStep};
    use crate::{run, SolverConfig, StepStrategy};

    fn lower_bound_run(rule: Box<dyn StepStrategy>, iters: usize) -> RunTrace {
        let n = 10;
        let config = SolverConfig::new(rule).max_iterations(iters).record_iterates(true).timing(false);
        run(
            &Region::simplex(n).unwrap(),
            &Objective::distance_squared(Vector::zeros(n)),
            &Vector::basis(n, 0),
            &config,
        )
        .unwrap()
    }

    #[test]
    fn open_loop_meets_the_rates() {
        let trace = lower_bound_run(Box::new(OpenLoop::new(2).unwrap()), 500);
        let d = std::f64::consts::SQRT_2;
        assert!(certify_primal_rate(&trace, 2.0, d, 0.1).unwrap().passed);
        let dual = certify_dual_rate(&trace, 2.0, d).unwrap();
        assert!(dual.passed);
        assert_eq!(dual.checked_points, 501);
        assert!(certify_contraction(&trace, 2.0, d, 0.1).unwrap().passed);
        assert!(certify_smoothness_progress(&trace, 2.0, d).unwrap().passed);
    }

    #[test]
    fn primal_rate_skips_the_first_row() {
        let mut trace = lower_bound_run(Box::new(OpenLoop::new(2).unwrap()), 1);
        trace.rows.truncate(1);
        let report = certify_primal_rate(&trace, 0.0, 0.0, -100.0).unwrap();
        assert!(report.passed);
        assert_eq!(report.checked_points, 0);
    }

    #[test]
    fn wrong_constants_fail_the_rate() {
        let trace = lower_bound_run(Box::new(OpenLoop::new(2).unwrap()), 50);
        assert!(!certify_primal_rate(&trace, 0.01, 1.0, 0.1).unwrap().passed);
    }

    #[test]
    fn short_step_is_monotone_but_open_loop_need_not_be() {
        let trace = lower_bound_run(Box::new(ShortStep::new(2.0).unwrap()), 30);
        assert!(certify_monotone(&trace).passed);
        assert!(certify_dual_rate(&trace, 2.0, std::f64::consts::SQRT_2).unwrap().passed);
    }

    #[test]
    fn gap_chain_on_the_simplex() {
        let trace = lower_bound_run(Box::new(AnytimeSqrt), 100);
        let report = certify_gap_chain(
            &trace,
            &Objective::distance_squared(Vector::zeros(10)),
            &Vector::filled(10, 0.1),
        )
        .unwrap();
        assert!(report.passed);
        assert_eq!(report.checked_points, 2 * 101);
    }

    fn fixed_lower_run(rule: Box<dyn StepStrategy>) -> (RunTrace, Region, Objective) {
        let n = 5;
        let region = Region::simplex(n).unwrap();
        let obj = Objective::distance_squared(Vector::basis(n, 0).scale(2.0));
        let config = SolverConfig::new(rule).max_iterations(40).record_iterates(true);
        let trace = run(&region, &obj, &Vector::basis(n, 1), &config).unwrap();
        (trace, region, obj)
    }

    #[test]
    fn fixed_lower_degenerates_when_first_step_lands_on_optimum() {
        let (trace, region, obj) = fixed_lower_run(Box::new(OpenLoop::new(2).unwrap()));
        let x_star = Vector::basis(5, 0);
        assert_eq!(trace.iterates.as_ref().unwrap()[1], x_star);
        assert_eq!(trace.termination, crate::Termination::GapReached);
        let report = certify_fixed_lower(&trace, &region, &obj, &x_star).unwrap();
        assert!(report.passed);
        assert_eq!(report.checked_points, 1);
    }

    #[test]
    fn fixed_lower_with_active_bound() {
        // γ = ½: x_t = e₁ + 2⁻ᵗ(e₂ − e₁), h_t = 2·2⁻ᵗ + 2·4⁻ᵗ, bound 2⁻⁽ᵗ⁻¹⁾
        let (trace, region, obj) = fixed_lower_run(Box::new(FixedStep::new(0.5).unwrap()));
        let report = certify_fixed_lower(&trace, &region, &obj, &Vector::basis(5, 0)).unwrap();
        assert!(report.passed);
        let h3 = trace.rows[3].f - 1.0;
        assert!((h3 - (2.0 / 8.0 + 2.0 / 64.0)).abs() < 1e-12);
        // slack at t = 3 is h₃ − ¼
        assert!(report.min_slack.unwrap() < 2.0 / 64.0 + 1e-12);
    }

    #[test]
    fn fixed_lower_rejects_non_optimal_reference() {
        let trace = lower_bound_run(Box::new(OpenLoop::new(2).unwrap()), 5);
        let obj = Objective::distance_squared(Vector::zeros(10));
        let err = certify_fixed_lower(&trace, &Region::simplex(10).unwrap(), &obj, &Vector::basis(10, 0));
        assert!(err.is_err());
    }

    #[test]
    fn nonconvex_needs_full_horizon() {
        let trace = lower_bound_run(Box::new(OpenLoop::new(2).unwrap()), 5);
        let err = certify_nonconvex(&trace, 1.0, 2.0, 1.0, 10, NonconvexVariant::Arithmetic);
        assert!(matches!(err, Err(FwError::InvalidInput(_))));
    }

    #[test]
    fn nonconvex_horizon_zero_checks_initial_gap() {
        let trace = lower_bound_run(Box::new(OpenLoop::new(2).unwrap()), 5);
        // gap₀ = 2 ≤ max{2h₀, LD²} = max{1.8, 4}
        let report =
            certify_nonconvex(&trace, 0.9, 2.0, std::f64::consts::SQRT_2, 0, NonconvexVariant::Arithmetic)
                .unwrap();
        assert!(report.passed);
    }

    #[test]
    fn geometric_step_size() {
        let gamma = NonconvexVariant::Geometric.step_size(1.0, 2.0, 1.0, 3);
        assert!((gamma - 0.5).abs() < 1e-15);
        assert_eq!(NonconvexVariant::Arithmetic.step_size(1.0, 2.0, 1.0, 3), 0.5);
    }
}
