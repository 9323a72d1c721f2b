use super::{Audit, CertificateReport};
use crate::{FwError, Objective, Region, RunTrace, Vector};

/// Objective of the simplex lower-bound instance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LowerBoundTarget {
    /// `f(x) = ‖x‖²`
    #[default]
    Origin,
    /// `f(x) = ‖x − (1/n, …, 1/n)‖²`, which equals `‖x‖² − 1/n` on the simplex.
    Uniform,
}

/// `‖x‖²` (or its shifted variant) over the probability simplex in dimension
/// `n`, started at `e₁`. The optimum is the barycenter.
pub fn lower_bound_instance(
    n: usize,
    target: LowerBoundTarget,
) -> Result<(Region, Objective, Vector), FwError> {
    if n < 2 {
        return Err(FwError::InvalidInput(format!("lower-bound instance needs n >= 2, got {n}")));
    }
    let center = match target {
        LowerBoundTarget::Origin => Vector::zeros(n),
        LowerBoundTarget::Uniform => Vector::filled(n, 1.0 / n as f64),
    };
    Ok((Region::simplex(n)?, Objective::distance_squared(center), Vector::basis(n, 0)))
}

/// `f(x_t) ≥ 1/(t+1) − 1e-12` for every `t < n` (shifted by `−1/n` for the
/// uniform variant): after `t` steps at most `t+1` vertices can be in play.
pub fn certify_lower_bound(trace: &RunTrace, n: usize, target: LowerBoundTarget) -> CertificateReport {
    let shift = match target {
        LowerBoundTarget::Origin => 0.0,
        LowerBoundTarget::Uniform => 1.0 / n as f64,
    };
    let mut audit = Audit::new("lower-bound");
    for row in trace.rows.iter().take_while(|r| r.t < n) {
        let bound = 1.0 / (row.t as f64 + 1.0) - shift;
        audit.le_within(|| format!("t={}", row.t), bound, row.f, 1e-12);
    }
    audit.finish()
}
