use super::{Audit, CertificateReport};
use crate::solver::fw_gap;
use crate::{FwError, Objective, Region, Vector};

/// Tolerance of the dual-price identities.
pub const DUAL_TOLERANCE: f64 = 1e-10;

/// Builds the closed-form box prices at `x` and checks, each within `1e-10`:
///
/// * stationarity `∇f(x) = −Aᵀλ`, coordinate by coordinate;
/// * `⟨∇f(x), v⟩ = −⟨λ, b⟩` for the Frank-Wolfe vertex `v`;
/// * Frank-Wolfe gap at `x` equals the complementarity gap `⟨λ, b − Ax⟩`.
pub fn certify_dual_prices(
    region: &Region,
    obj: &Objective,
    x: &Vector,
) -> Result<CertificateReport, FwError> {
    let violation = region.constraint_violation(x);
    if violation > 1e-9 {
        return Err(FwError::InvalidInput(format!("point is infeasible by {violation}")));
    }
    let gradient = obj.gradient(x)?;
    let prices = region.box_dual_prices(&gradient)?;
    let (gap, vertex) = fw_gap(region, x, &gradient)?;

    let mut audit = Audit::new("dual-prices");
    for (i, (g, a)) in gradient.iter().zip(prices.transpose_apply()).enumerate() {
        audit.eq_within(|| format!("stationarity row {i}"), *g, -a, DUAL_TOLERANCE);
    }
    audit.eq_within(|| "vertex value".into(), gradient.dot(&vertex), -prices.dual_value(), DUAL_TOLERANCE);
    audit.eq_within(|| "complementarity gap".into(), gap, prices.complementarity_gap(x), DUAL_TOLERANCE);
    Ok(audit.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn closed_form_instance() {
        let region = Region::unit_box(3, 0.0, 1.0).unwrap();
        let obj = Objective::distance_squared(v(&[2.0, -1.0, 0.5]));
        let report = certify_dual_prices(&region, &obj, &v(&[0.5, 0.5, 0.5])).unwrap();
        assert!(report.passed, "{report:?}");
        assert_eq!(report.checked_points, 5);
    }

    #[test]
    fn vertex_has_zero_complementarity() {
        let region = Region::unit_box(2, 0.0, 1.0).unwrap();
        let obj = Objective::distance_squared(v(&[2.0, -1.0]));
        let x = v(&[1.0, 0.0]);
        let report = certify_dual_prices(&region, &obj, &x).unwrap();
        assert!(report.passed);
        let prices = region.box_dual_prices(&obj.gradient(&x).unwrap()).unwrap();
        assert_eq!(prices.complementarity_gap(&x), 0.0);
    }

    #[test]
    fn stationary_point_has_zero_prices() {
        let region = Region::unit_box(2, 0.0, 1.0).unwrap();
        let obj = Objective::distance_squared(v(&[0.3, 0.6]));
        let x = v(&[0.3, 0.6]);
        assert!(certify_dual_prices(&region, &obj, &x).unwrap().passed);
        let prices = region.box_dual_prices(&obj.gradient(&x).unwrap()).unwrap();
        assert!(prices.lambda().iter().all(|&l| l == 0.0));
    }

    #[test]
    fn non_box_regions_are_unsupported() {
        let region = Region::simplex(2).unwrap();
        let obj = Objective::distance_squared(Vector::zeros(2));
        let err = certify_dual_prices(&region, &obj, &v(&[0.5, 0.5])).unwrap_err();
        assert!(matches!(err, FwError::UnsupportedRegion { .. }));
    }
}
