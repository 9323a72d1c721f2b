use super::{Audit, CertificateReport, SamplePairs, TOLERANCE};
use crate::solver::fw_gap;
use crate::{FwError, Objective, Region, Vector};

struct PairData {
    fx: f64,
    fy: f64,
    gx: Vector,
    gy: Vector,
    /// `y − x`
    d: Vector,
}

impl PairData {
    fn new(obj: &Objective, x: &Vector, y: &Vector) -> Result<Self, FwError> {
        let (fx, gx) = obj.evaluate(x)?;
        let (fy, gy) = obj.evaluate(y)?;
        Ok(Self { fx, fy, gx, gy, d: y - x })
    }

    /// `f(y) − f(x) − ⟨∇f(x), y − x⟩`
    fn bregman(&self) -> f64 {
        self.fy - self.fx - self.gx.dot(&self.d)
    }

    /// `⟨∇f(y) − ∇f(x), y − x⟩`
    fn gradient_monotonicity(&self) -> f64 {
        (&self.gy - &self.gx).dot(&self.d)
    }
}

/// Checks `f(y) − f(x) ≥ ⟨∇f(x), y − x⟩` on every pair, in both orders, and
/// the strongly convex form `… + (μ/2)‖y − x‖²` when `μ` is declared.
pub fn check_convexity(obj: &Objective, samples: &SamplePairs) -> Result<CertificateReport, FwError> {
    let mut audit = Audit::new("convexity").seed(samples.seed);
    let mu = obj.strong_convexity();
    for (i, (a, b)) in samples.pairs.iter().enumerate() {
        for (order, x, y) in [("xy", a, b), ("yx", b, a)] {
            let p = PairData::new(obj, x, y)?;
            let linear = p.gx.dot(&p.d);
            let gain = p.fy - p.fx;
            audit.le(|| format!("pair {i} {order}: convex"), linear, gain, TOLERANCE);
            if let Some(mu) = mu {
                let lower = linear + 0.5 * mu * p.d.norm_sq();
                audit.le(|| format!("pair {i} {order}: strongly convex"), lower, gain, TOLERANCE);
            }
        }
    }
    Ok(audit.finish())
}

/// Checks the four smoothness inequalities for the declared `L` on every
/// pair, in both orders:
///
/// * `f(y) − f(x) − ⟨∇f(x), y − x⟩ ≤ (L/2)‖y − x‖²`
/// * `⟨∇f(y) − ∇f(x), y − x⟩ ≤ L‖y − x‖²`
/// * `⟨∇f(y) − ∇f(x), y − x⟩² / (2L‖y − x‖²) ≤ f(y) − f(x) − ⟨∇f(x), y − x⟩`
/// * `‖∇f(y) − ∇f(x)‖² ≤ 2L(f(y) − f(x) − ⟨∇f(x), y − x⟩)`
///
/// The last two need convexity and are skipped for objectives not declared
/// convex.
pub fn check_smoothness(obj: &Objective, samples: &SamplePairs) -> Result<CertificateReport, FwError> {
    let l = obj.smoothness().ok_or(FwError::UnsupportedObjective("smoothness check needs a declared L"))?;
    let mut audit = Audit::new("smoothness").seed(samples.seed);
    for (i, (a, b)) in samples.pairs.iter().enumerate() {
        for (order, x, y) in [("xy", a, b), ("yx", b, a)] {
            let p = PairData::new(obj, x, y)?;
            let dist_sq = p.d.norm_sq();
            let bregman = p.bregman();
            let mono = p.gradient_monotonicity();
            audit.le(|| format!("pair {i} {order}: base"), bregman, 0.5 * l * dist_sq, TOLERANCE);
            audit.le(|| format!("pair {i} {order}: gradient"), mono, l * dist_sq, TOLERANCE);
            if obj.is_convex() {
                let projected = if dist_sq > 0.0 { mono * mono / (2.0 * l * dist_sq) } else { 0.0 };
                audit.le(|| format!("pair {i} {order}: revisited"), projected, bregman, TOLERANCE);
                let diff_sq = (&p.gy - &p.gx).norm_sq();
                audit.le(
                    || format!("pair {i} {order}: gradient difference"),
                    diff_sq,
                    2.0 * l * bregman,
                    TOLERANCE,
                );
            }
        }
    }
    Ok(audit.finish())
}

/// `true` iff the Frank-Wolfe gap at `x` is at most `tol`.
pub fn check_first_order_optimality(
    region: &Region,
    obj: &Objective,
    x: &Vector,
    tol: f64,
) -> Result<bool, FwError> {
    let gradient = obj.gradient(x)?;
    let (gap, _) = fw_gap(region, x, &gradient)?;
    Ok(gap <= tol)
}
