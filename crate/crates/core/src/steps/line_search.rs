use super::{StepContext, StepOutcome, StepStrategy};
use crate::{FwError, Objective, Vector};

/// Exact minimizer of `f(x + γ(v − x))` over `γ ∈ [0, 1]` for objectives with
/// a constant Hessian.
///
/// Flat or concave directions go to whichever endpoint the slope favours.
pub fn exact_line_search_quadratic(
    objective: &Objective,
    x: &Vector,
    vertex: &Vector,
) -> Result<f64, FwError> {
    let gradient = objective.gradient(x)?;
    line_search_with_gradient(objective, x, vertex, &gradient)
}

fn line_search_with_gradient(
    objective: &Objective,
    x: &Vector,
    vertex: &Vector,
    gradient: &Vector,
) -> Result<f64, FwError> {
    let direction = vertex - x;
    if direction.norm_sq() == 0.0 {
        return Ok(0.0);
    }
    let curvature =
        objective.curvature(x, &direction)?.ok_or(FwError::UnsupportedObjective("exact line search"))?;
    let slope = gradient.dot(&direction);
    if curvature <= 0.0 {
        return Ok(if slope < 0.0 { 1.0 } else { 0.0 });
    }
    Ok((-slope / curvature).clamp(0.0, 1.0))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LineSearch;

impl StepStrategy for LineSearch {
    fn label(&self) -> String {
        "linesearch".into()
    }

    fn requires_convexity(&self) -> bool {
        true
    }

    fn step(&mut self, ctx: &StepContext<'_>) -> Result<StepOutcome, FwError> {
        let gamma = line_search_with_gradient(ctx.objective, ctx.x, ctx.vertex, ctx.gradient)?;
        Ok(StepOutcome::plain(gamma))
    }

    fn clone_box(&self) -> Box<dyn StepStrategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SymmetricMatrix;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn matches_short_step_on_standard_quadratic() {
        let obj = Objective::distance_squared(Vector::zeros(3));
        let gamma = exact_line_search_quadratic(&obj, &Vector::basis(3, 0), &Vector::basis(3, 1)).unwrap();
        assert_eq!(gamma, 0.5);
    }

    #[test]
    fn zero_at_optimum() {
        let x = v(&[0.2, 0.8]);
        let obj = Objective::distance_squared(x.clone());
        assert_eq!(exact_line_search_quadratic(&obj, &x, &v(&[1.0, 0.0])).unwrap(), 0.0);
    }

    #[test]
    fn one_dimensional_quadratic() {
        let obj = Objective::quadratic(SymmetricMatrix::scaled_identity(2, 2.0), Vector::zeros(2)).unwrap();
        let gamma = exact_line_search_quadratic(&obj, &v(&[1.0, 0.0]), &v(&[-1.0, 0.0])).unwrap();
        assert_eq!(gamma, 0.5);
    }

    #[test]
    fn concave_direction_goes_to_endpoint() {
        let obj = Objective::quadratic(SymmetricMatrix::scaled_identity(1, -2.0), v(&[0.0])).unwrap();
        // f = -x², moving from 0.5 toward 1 decreases f all the way
        assert_eq!(exact_line_search_quadratic(&obj, &v(&[0.5]), &v(&[1.0])).unwrap(), 1.0);
        let flat = Objective::quadratic(SymmetricMatrix::scaled_identity(1, 0.0), v(&[1.0])).unwrap();
        assert_eq!(exact_line_search_quadratic(&flat, &v(&[0.5]), &v(&[1.0])).unwrap(), 0.0);
    }
}
