//! First-order oracles for the objectives used by the solver.
//!
//! Two closed-form families are built in: the squared distance
//! `f(x) = ‖x − p‖²` and general quadratics `f(x) = ½xᵀQx + bᵀx`. Anything
//! else can be supplied in-process through [`FirstOrderOracle`].

use std::fmt;
use std::sync::Arc;

use crate::{FwError, Vector};

/// User-supplied objective. Implementations must be pure: the same point
/// always yields the same value and gradient.
pub trait FirstOrderOracle: Send + Sync {
    fn dim(&self) -> usize;

    fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>);

    /// `dᵀ∇²f(x)d`, when the oracle knows it. Only needed by exact line search.
    fn curvature(&self, _x: &[f64], _direction: &[f64]) -> Option<f64> {
        None
    }
}

/// Dense symmetric matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, FwError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(FwError::InvalidInput("matrix must be non-empty".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(FwError::DimensionMismatch { expected: dim, found: row.len() });
            }
            entries.extend(row);
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(FwError::NonFinite("matrix entries"));
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                let (a, b) = (entries[i * dim + j], entries[j * dim + i]);
                if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                    return Err(FwError::InvalidInput(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn scaled_identity(dim: usize, scale: f64) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = scale;
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.entries.chunks(self.dim).map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// Gershgorin bound on the largest eigenvalue magnitude.
    pub fn gershgorin_bound(&self) -> f64 {
        self.entries.chunks(self.dim).map(|row| row.iter().map(|e| e.abs()).sum::<f64>()).fold(0.0, f64::max)
    }
}

#[derive(Clone)]
pub enum ObjectiveKind {
    /// `‖x − center‖²`
    DistanceSquared {
        center: Vector,
    },
    /// `½xᵀQx + bᵀx`
    Quadratic {
        hessian: SymmetricMatrix,
        linear: Vector,
    },
    Custom(Arc<dyn FirstOrderOracle>),
}

impl fmt::Debug for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DistanceSquared { center } => {
                f.debug_struct("DistanceSquared").field("center", center).finish()
            }
            Self::Quadratic { hessian, linear } => {
                f.debug_struct("Quadratic").field("hessian", hessian).field("linear", linear).finish()
            }
            Self::Custom(oracle) => write!(f, "Custom(dim = {})", oracle.dim()),
        }
    }
}

/// An objective together with the regularity constants it declares.
///
/// The constants are metadata: they are trusted by the short step and by the
/// certificates, and audited by [`crate::certify::check_smoothness`] and
/// [`crate::certify::check_convexity`].
#[derive(Clone, Debug)]
pub struct Objective {
    kind: ObjectiveKind,
    smoothness: Option<f64>,
    strong_convexity: Option<f64>,
    convex: bool,
}

impl Objective {
    /// `‖x − center‖²`, with smoothness and strong convexity both exactly 2.
    pub fn distance_squared(center: Vector) -> Self {
        Self {
            kind: ObjectiveKind::DistanceSquared { center },
            smoothness: Some(2.0),
            strong_convexity: Some(2.0),
            convex: true,
        }
    }

    /// `½xᵀQx + bᵀx`. No constants are declared and convexity is off until
    /// set with the builder methods.
    pub fn quadratic(hessian: SymmetricMatrix, linear: Vector) -> Result<Self, FwError> {
        if hessian.dim() != linear.dim() {
            return Err(FwError::DimensionMismatch { expected: hessian.dim(), found: linear.dim() });
        }
        Ok(Self {
            kind: ObjectiveKind::Quadratic { hessian, linear },
            smoothness: None,
            strong_convexity: None,
            convex: false,
        })
    }

    pub fn custom(oracle: Arc<dyn FirstOrderOracle>, convex: bool) -> Self {
        Self { kind: ObjectiveKind::Custom(oracle), smoothness: None, strong_convexity: None, convex }
    }

    /// Replaces both declared constants at once.
    pub fn with_bounds(
        mut self,
        smoothness: Option<f64>,
        strong_convexity: Option<f64>,
    ) -> Result<Self, FwError> {
        for (name, value) in [("smoothness", smoothness), ("strong convexity", strong_convexity)] {
            if let Some(v) = value {
                if !v.is_finite() || v < 0.0 {
                    return Err(FwError::InvalidInput(format!(
                        "{name} constant must be finite and nonnegative, got {v}"
                    )));
                }
            }
        }
        if let (Some(l), Some(mu)) = (smoothness, strong_convexity) {
            if mu > l {
                return Err(FwError::InvalidInput(format!("strong convexity {mu} exceeds smoothness {l}")));
            }
        }
        self.smoothness = smoothness;
        self.strong_convexity = strong_convexity;
        Ok(self)
    }

    pub fn with_smoothness(self, smoothness: f64) -> Result<Self, FwError> {
        let mu = self.strong_convexity;
        self.with_bounds(Some(smoothness), mu)
    }

    pub fn with_strong_convexity(self, mu: f64) -> Result<Self, FwError> {
        let l = self.smoothness;
        self.with_bounds(l, Some(mu))
    }

    pub fn with_convexity(mut self, convex: bool) -> Self {
        self.convex = convex;
        self
    }

    pub fn kind(&self) -> &ObjectiveKind {
        &self.kind
    }

    pub fn smoothness(&self) -> Option<f64> {
        self.smoothness
    }

    pub fn strong_convexity(&self) -> Option<f64> {
        self.strong_convexity
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            ObjectiveKind::DistanceSquared { center } => center.dim(),
            ObjectiveKind::Quadratic { hessian, .. } => hessian.dim(),
            ObjectiveKind::Custom(oracle) => oracle.dim(),
        }
    }

    fn check_dim(&self, x: &Vector) -> Result<(), FwError> {
        if x.dim() != self.dim() {
            return Err(FwError::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        Ok(())
    }

    /// Value and gradient at `x`.
    pub fn evaluate(&self, x: &Vector) -> Result<(f64, Vector), FwError> {
        self.check_dim(x)?;
        let (value, gradient) = match &self.kind {
            ObjectiveKind::DistanceSquared { center } => {
                let diff = x - center;
                (diff.norm_sq(), diff.scale(2.0).into_inner())
            }
            ObjectiveKind::Quadratic { hessian, linear } => {
                let qx = hessian.mul_vec(x.as_slice());
                let value = 0.5 * x.iter().zip(&qx).map(|(a, b)| a * b).sum::<f64>() + linear.dot(x);
                let gradient = qx.iter().zip(linear.iter()).map(|(a, b)| a + b).collect();
                (value, gradient)
            }
            ObjectiveKind::Custom(oracle) => {
                let (value, gradient) = oracle.value_and_gradient(x.as_slice());
                if gradient.len() != self.dim() {
                    return Err(FwError::DimensionMismatch { expected: self.dim(), found: gradient.len() });
                }
                (value, gradient)
            }
        };
        if !value.is_finite() {
            return Err(FwError::NonFinite("objective value"));
        }
        let gradient = Vector::new(gradient).map_err(|_| FwError::NonFinite("gradient"))?;
        Ok((value, gradient))
    }

    pub fn value(&self, x: &Vector) -> Result<f64, FwError> {
        self.evaluate(x).map(|(value, _)| value)
    }

    pub fn gradient(&self, x: &Vector) -> Result<Vector, FwError> {
        self.evaluate(x).map(|(_, gradient)| gradient)
    }

    /// `dᵀ∇²f(x)d`; `None` when the objective cannot provide it.
    pub fn curvature(&self, x: &Vector, direction: &Vector) -> Result<Option<f64>, FwError> {
        self.check_dim(x)?;
        self.check_dim(direction)?;
        Ok(match &self.kind {
            ObjectiveKind::DistanceSquared { .. } => Some(2.0 * direction.norm_sq()),
            ObjectiveKind::Quadratic { hessian, .. } => Some(hessian.quadratic_form(direction.as_slice())),
            ObjectiveKind::Custom(oracle) => oracle.curvature(x.as_slice(), direction.as_slice()),
        })
    }

    /// Central differences `(f(x + h eᵢ) − f(x − h eᵢ)) / 2h`.
    pub fn finite_difference_gradient(&self, x: &Vector, h: f64) -> Result<Vector, FwError> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(FwError::InvalidInput(format!("step h must be positive, got {h}")));
        }
        self.check_dim(x)?;
        let mut probe = x.clone().into_inner();
        let mut out = Vec::with_capacity(x.dim());
        for i in 0..x.dim() {
            let orig = probe[i];
            probe[i] = orig + h;
            let up = self.value(&Vector::from_raw(probe.clone()))?;
            probe[i] = orig - h;
            let down = self.value(&Vector::from_raw(probe.clone()))?;
            probe[i] = orig;
            out.push((up - down) / (2.0 * h));
        }
        Vector::new(out).map_err(|_| FwError::NonFinite("finite-difference gradient"))
    }
}
