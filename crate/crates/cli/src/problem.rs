//! JSON problem specs: an objective, a region, a starting point and an
//! optional known optimal value.

use std::path::Path;

use fwkit::certify::LowerBoundTarget;
use fwkit::{Objective, ObjectiveKind, Region, SymmetricMatrix, Vector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::output::CliError;

/// Largest dimension accepted for dense quadratic objectives.
pub const MAX_QUADRATIC_DIM: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub objective: ObjectiveSpec,
    pub region: Region,
    #[serde(default)]
    pub x0: StartSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_star: Option<f64>,
}

/// Objective descriptor. Giving either constant replaces both declared
/// constants of the built-in objective.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectiveSpec {
    /// `‖x − center‖²`
    DistanceSquared {
        center: Vector,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        smoothness: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        strong_convexity: Option<f64>,
    },
    /// `½xᵀQx + bᵀx`
    Quadratic {
        hessian: Vec<Vec<f64>>,
        linear: Vector,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        smoothness: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        strong_convexity: Option<f64>,
        #[serde(default)]
        convex: bool,
    },
}

/// Starting point.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartSpec {
    /// `lmo(∇f(0))`
    #[default]
    #[serde(rename = "lmo-seed")]
    LmoSeed,
    /// `lmo(−e_k)`; `e_k` itself on the simplex.
    VertexIndex(usize),
    Vector(Vector),
}

/// A validated, ready-to-run problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub region: Region,
    pub objective: Objective,
    pub x0: Vector,
    pub f_star: Option<f64>,
}

impl ObjectiveSpec {
    pub fn build(&self) -> Result<Objective, CliError> {
        let (objective, smoothness, strong_convexity) = match self {
            Self::DistanceSquared { center, smoothness, strong_convexity } => {
                (Objective::distance_squared(center.clone()), *smoothness, *strong_convexity)
            }
            Self::Quadratic { hessian, linear, smoothness, strong_convexity, convex } => {
                if linear.dim() > MAX_QUADRATIC_DIM {
                    return Err(CliError::BadInput(format!(
                        "quadratic dimension {} exceeds the limit {MAX_QUADRATIC_DIM}",
                        linear.dim()
                    )));
                }
                let hessian = SymmetricMatrix::from_rows(hessian.clone())?;
                let obj = Objective::quadratic(hessian, linear.clone())?.with_convexity(*convex);
                (obj, *smoothness, *strong_convexity)
            }
        };
        if smoothness.is_none() && strong_convexity.is_none() {
            return Ok(objective);
        }
        Ok(objective.with_bounds(smoothness, strong_convexity)?)
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::DistanceSquared { center, .. } => center.dim(),
            Self::Quadratic { linear, .. } => linear.dim(),
        }
    }
}

impl ProblemSpec {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::BadInput(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::BadInput(format!("cannot parse {}: {e}", path.display())))
    }

    pub fn build(&self) -> Result<Problem, CliError> {
        self.region.validate()?;
        let n = self.region.dim();
        if self.objective.dim() != n {
            return Err(CliError::BadInput(format!(
                "objective has dimension {} but region {} has dimension {n}",
                self.objective.dim(),
                self.region
            )));
        }
        let objective = self.objective.build()?;
        let x0 = match &self.x0 {
            StartSpec::LmoSeed => self.region.lmo(&objective.gradient(&Vector::zeros(n))?)?,
            StartSpec::VertexIndex(k) => {
                if *k >= n {
                    return Err(CliError::BadInput(format!(
                        "vertex_index {k} out of range for dimension {n}"
                    )));
                }
                self.region.lmo(&Vector::basis(n, *k).scale(-1.0))?
            }
            StartSpec::Vector(x) => {
                if x.dim() != n {
                    return Err(CliError::BadInput(format!("x0 has dimension {}, expected {n}", x.dim())));
                }
                if !self.region.contains(x, 1e-9) {
                    return Err(CliError::BadInput(format!("x0 lies outside {}", self.region)));
                }
                x.clone()
            }
        };
        if let Some(f) = self.f_star {
            if !f.is_finite() {
                return Err(CliError::BadInput("f_star must be finite".into()));
            }
        }
        Ok(Problem { region: self.region.clone(), objective, x0, f_star: self.f_star })
    }

    /// The simplex lower-bound instance in dimension `n`, started at `e₁`.
    pub fn lower_bound(n: usize, target: LowerBoundTarget) -> Result<Self, CliError> {
        let (region, objective, _) = fwkit::certify::lower_bound_instance(n, target)?;
        let ObjectiveKind::DistanceSquared { center } = objective.kind() else {
            unreachable!("the lower-bound instance is a distance objective")
        };
        let f_star = match target {
            LowerBoundTarget::Origin => 1.0 / n as f64,
            LowerBoundTarget::Uniform => 0.0,
        };
        Ok(Self {
            objective: ObjectiveSpec::DistanceSquared {
                center: center.clone(),
                smoothness: None,
                strong_convexity: None,
            },
            region,
            x0: StartSpec::VertexIndex(0),
            f_star: Some(f_star),
        })
    }

    /// Default comparison instance: `‖x − c‖²` over the K-sparse polytope
    /// with `n = 100`, `K = 10`, `τ = 1`, and `c` standard normal drawn from
    /// `seed`. The parameters are a chosen default, not a reference instance.
    pub fn default_ksparse(seed: u64) -> Self {
        let n = 100;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let center: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        Self {
            objective: ObjectiveSpec::DistanceSquared {
                center: Vector::new(center).expect("normal draws are finite"),
                smoothness: None,
                strong_convexity: None,
            },
            region: Region::KSparse { n, k: 10, tau: 1.0 },
            x0: StartSpec::LmoSeed,
            f_star: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> Result<Problem, CliError> {
        serde_json::from_str::<ProblemSpec>(json).map_err(|e| CliError::BadInput(e.to_string()))?.build()
    }

    #[test]
    fn full_spec_round_trips() {
        let spec = ProblemSpec::lower_bound(4, LowerBoundTarget::Origin).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            json,
            r#"{"objective":{"type":"distance_squared","center":[0.0,0.0,0.0,0.0]},"region":{"type":"simplex","n":4},"x0":{"vertex_index":0},"f_star":0.25}"#
        );
        assert_eq!(serde_json::from_str::<ProblemSpec>(&json).unwrap(), spec);
        let problem = spec.build().unwrap();
        assert_eq!(problem.x0, Vector::basis(4, 0));
    }

    #[test]
    fn start_variants() {
        let base = r#"{"objective":{"type":"distance_squared","center":[0.2,-0.5]},"region":{"type":"box","n":2,"lo":-1,"hi":1}"#;
        let seed = parse(&format!("{base}}}")).unwrap();
        // ∇f(0) = (−0.4, 1.0)
        assert_eq!(seed.x0.as_slice(), &[1.0, -1.0]);
        let vertex = parse(&format!(r#"{base},"x0":{{"vertex_index":1}}}}"#)).unwrap();
        assert_eq!(vertex.x0.as_slice(), &[-1.0, 1.0]);
        let explicit = parse(&format!(r#"{base},"x0":{{"vector":[0.5,0.5]}}}}"#)).unwrap();
        assert_eq!(explicit.x0.as_slice(), &[0.5, 0.5]);
        assert!(parse(&format!(r#"{base},"x0":{{"vector":[2,0]}}}}"#)).is_err());
        assert!(parse(&format!(r#"{base},"x0":{{"vertex_index":2}}}}"#)).is_err());
    }

    #[test]
    fn overrides_replace_both_constants() {
        let spec = ObjectiveSpec::DistanceSquared {
            center: Vector::zeros(2),
            smoothness: Some(1.0),
            strong_convexity: None,
        };
        let obj = spec.build().unwrap();
        assert_eq!(obj.smoothness(), Some(1.0));
        assert_eq!(obj.strong_convexity(), None);
    }

    #[test]
    fn rejects_bad_specs() {
        // dimension disagreement
        assert!(parse(
            r#"{"objective":{"type":"distance_squared","center":[0,0]},"region":{"type":"simplex","n":3}}"#
        )
        .is_err());
        // unknown field
        assert!(serde_json::from_str::<ProblemSpec>(
            r#"{"objective":{"type":"distance_squared","center":[0],"l":2},"region":{"type":"simplex","n":1}}"#
        )
        .is_err());
        // invalid region parameters
        assert!(parse(r#"{"objective":{"type":"distance_squared","center":[0]},"region":{"type":"box","n":1,"lo":1,"hi":0}}"#).is_err());
        // asymmetric hessian
        assert!(parse(
            r#"{"objective":{"type":"quadratic","hessian":[[1,2],[0,1]],"linear":[0,0]},"region":{"type":"simplex","n":2}}"#
        )
        .is_err());
    }

    #[test]
    fn default_ksparse_is_seeded() {
        let a = ProblemSpec::default_ksparse(42);
        assert_eq!(a, ProblemSpec::default_ksparse(42));
        assert_ne!(a, ProblemSpec::default_ksparse(43));
        let problem = a.build().unwrap();
        assert!(problem.region.contains(&problem.x0, 0.0));
    }
}
