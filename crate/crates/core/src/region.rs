//! Feasible regions and their linear minimization oracles.
//!
//! Every oracle breaks ties toward the lowest coordinate index, and a zero
//! cost vector yields the lexicographically smallest vertex, so traces are
//! reproducible bit for bit.

use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::{FwError, Vector};

/// Compact convex feasible set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Region {
    /// Probability simplex `{x ≥ 0, Σxᵢ = 1}`.
    Simplex { n: usize },
    /// `{lo ≤ xᵢ ≤ hi}`.
    Box { n: usize, lo: f64, hi: f64 },
    /// Convex hull of vectors with at most `k` nonzero entries equal to `±tau`,
    /// i.e. `{‖x‖₁ ≤ k·tau} ∩ {‖x‖∞ ≤ tau}`.
    #[serde(rename = "ksparse")]
    KSparse { n: usize, k: usize, tau: f64 },
    #[serde(rename = "l1ball")]
    L1Ball { n: usize, radius: f64 },
    #[serde(rename = "l2ball")]
    L2Ball { n: usize, radius: f64 },
}

impl Region {
    pub fn simplex(n: usize) -> Result<Self, FwError> {
        Self::Simplex { n }.validated()
    }

    pub fn unit_box(n: usize, lo: f64, hi: f64) -> Result<Self, FwError> {
        Self::Box { n, lo, hi }.validated()
    }

    pub fn ksparse(n: usize, k: usize, tau: f64) -> Result<Self, FwError> {
        Self::KSparse { n, k, tau }.validated()
    }

    pub fn l1_ball(n: usize, radius: f64) -> Result<Self, FwError> {
        Self::L1Ball { n, radius }.validated()
    }

    pub fn l2_ball(n: usize, radius: f64) -> Result<Self, FwError> {
        Self::L2Ball { n, radius }.validated()
    }

    fn validated(self) -> Result<Self, FwError> {
        self.validate()?;
        Ok(self)
    }

    /// Checks the descriptor parameters; needed after deserialization.
    pub fn validate(&self) -> Result<(), FwError> {
        let bad = |msg: String| Err(FwError::InvalidInput(msg));
        if self.dim() == 0 {
            return bad(format!("{self}: dimension must be >= 1"));
        }
        match *self {
            Self::Simplex { .. } => Ok(()),
            Self::Box { lo, hi, .. } => {
                if lo.is_finite() && hi.is_finite() && lo <= hi {
                    Ok(())
                } else {
                    bad(format!("{self}: bounds must be finite with lo <= hi"))
                }
            }
            Self::KSparse { k, tau, .. } => {
                if k >= 1 && tau.is_finite() && tau > 0.0 {
                    Ok(())
                } else {
                    bad(format!("{self}: need k >= 1 and tau > 0"))
                }
            }
            Self::L1Ball { radius, .. } | Self::L2Ball { radius, .. } => {
                if radius.is_finite() && radius > 0.0 {
                    Ok(())
                } else {
                    bad(format!("{self}: radius must be positive"))
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Self::Simplex { n }
            | Self::Box { n, .. }
            | Self::KSparse { n, .. }
            | Self::L1Ball { n, .. }
            | Self::L2Ball { n, .. } => n,
        }
    }

    fn check_dim(&self, c: &Vector) -> Result<(), FwError> {
        if c.dim() != self.dim() {
            return Err(FwError::DimensionMismatch { expected: self.dim(), found: c.dim() });
        }
        Ok(())
    }

    /// Linear minimization oracle: an extreme point minimizing `⟨c, v⟩`.
    pub fn lmo(&self, c: &Vector) -> Result<Vector, FwError> {
        self.check_dim(c)?;
        let n = self.dim();
        let coords = match *self {
            Self::Simplex { .. } => {
                let mut best = 0;
                for (i, ci) in c.iter().enumerate() {
                    if *ci < c[best] {
                        best = i;
                    }
                }
                return Ok(Vector::basis(n, best));
            }
            Self::Box { lo, hi, .. } => c.iter().map(|&ci| if ci < 0.0 { hi } else { lo }).collect(),
            Self::KSparse { k, tau, .. } => {
                let mut order: Vec<usize> = (0..n).collect();
                // stable sort keeps the lowest index first among equal magnitudes
                order.sort_by(|&a, &b| c[b].abs().total_cmp(&c[a].abs()));
                let mut coords = vec![0.0; n];
                for &i in order.iter().take(k.min(n)) {
                    coords[i] = if c[i] < 0.0 { tau } else { -tau };
                }
                coords
            }
            Self::L1Ball { radius, .. } => {
                let mut best = 0;
                for (i, ci) in c.iter().enumerate() {
                    if ci.abs() > c[best].abs() {
                        best = i;
                    }
                }
                let mut coords = vec![0.0; n];
                coords[best] = if c[best] < 0.0 { radius } else { -radius };
                coords
            }
            Self::L2Ball { radius, .. } => {
                let norm = c.norm();
                if norm == 0.0 {
                    return Ok(Vector::zeros(n));
                }
                let mut v = c.scale(-radius / norm);
                // keep the boundary point inside the ball under rounding
                while v.norm() > radius {
                    v = v.scale(1.0 - f64::EPSILON);
                }
                return Ok(v);
            }
        };
        Ok(Vector::from_raw(coords))
    }

    /// Largest violation of the defining constraints at `x` (0 when feasible).
    /// A dimension mismatch counts as infinitely infeasible.
    pub fn constraint_violation(&self, x: &Vector) -> f64 {
        if x.dim() != self.dim() || !x.is_finite() {
            return f64::INFINITY;
        }
        let violation = match *self {
            Self::Simplex { .. } => {
                let neg = x.iter().fold(0.0_f64, |m, &xi| m.max(-xi));
                let sum: f64 = x.iter().sum();
                neg.max((sum - 1.0).abs())
            }
            Self::Box { lo, hi, .. } => x.iter().fold(0.0_f64, |m, &xi| m.max(lo - xi).max(xi - hi)),
            Self::KSparse { n, k, tau } => {
                let budget = k.min(n) as f64 * tau;
                (x.norm_inf() - tau).max(x.norm_l1() - budget)
            }
            Self::L1Ball { radius, .. } => x.norm_l1() - radius,
            Self::L2Ball { radius, .. } => x.norm() - radius,
        };
        violation.max(0.0)
    }

    /// True iff `x` satisfies every defining constraint within additive `tol`.
    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.constraint_violation(x) <= tol
    }

    /// Exact ℓ2 diameter `max ‖x − y‖` over the region.
    pub fn diameter(&self) -> f64 {
        match *self {
            Self::Simplex { n } => {
                if n >= 2 {
                    std::f64::consts::SQRT_2
                } else {
                    0.0
                }
            }
            Self::Box { n, lo, hi } => (hi - lo) * (n as f64).sqrt(),
            Self::KSparse { n, k, tau } => 2.0 * tau * (k.min(n) as f64).sqrt(),
            Self::L1Ball { radius, .. } | Self::L2Ball { radius, .. } => 2.0 * radius,
        }
    }

    /// Center of symmetry (barycenter for the simplex).
    pub fn center(&self) -> Vector {
        let n = self.dim();
        match *self {
            Self::Simplex { .. } => Vector::filled(n, 1.0 / n as f64),
            Self::Box { lo, hi, .. } => Vector::filled(n, 0.5 * (lo + hi)),
            _ => Vector::zeros(n),
        }
    }

    /// A random feasible point. Simplex points are normalized exponentials and
    /// box points are uniform per coordinate; the other regions use simple
    /// rescaling constructions that cover the interior.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector {
        let n = self.dim();
        match *self {
            Self::Simplex { .. } => {
                let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
                let total: f64 = w.iter().sum();
                Vector::from_raw(w.into_iter().map(|wi| wi / total).collect())
            }
            Self::Box { lo, hi, .. } => {
                Vector::from_raw((0..n).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect())
            }
            Self::KSparse { k, tau, .. } => {
                let y = Vector::from_raw((0..n).map(|_| tau * (2.0 * rng.random::<f64>() - 1.0)).collect());
                let budget = k.min(n) as f64 * tau;
                let l1 = y.norm_l1();
                if l1 > budget {
                    y.scale(budget / l1)
                } else {
                    y
                }
            }
            Self::L1Ball { radius, .. } => {
                let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
                let total: f64 = w.iter().sum();
                let r = radius * rng.random::<f64>();
                Vector::from_raw(
                    w.into_iter()
                        .map(|wi| {
                            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                            sign * r * wi / total
                        })
                        .collect(),
                )
            }
            Self::L2Ball { radius, .. } => {
                let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
                let g = Vector::from_raw(g);
                let norm = g.norm();
                if norm == 0.0 {
                    return Vector::zeros(n);
                }
                let r = radius * rng.random::<f64>().powf(1.0 / n as f64);
                g.scale(r / norm)
            }
        }
    }

    /// Closed-form dual prices for the box description
    /// `xᵢ ≤ hi` (rows `0..n`) and `−xᵢ ≤ −lo` (rows `n..2n`).
    pub fn box_dual_prices(&self, gradient: &Vector) -> Result<DualPrices, FwError> {
        let Self::Box { n, lo, hi } = *self else {
            return Err(FwError::UnsupportedRegion {
                operation: "closed-form dual prices",
                region: self.to_string(),
            });
        };
        self.check_dim(gradient)?;
        let upper = gradient.iter().map(|g| (-g).max(0.0)).collect();
        let lower = gradient.iter().map(|g| g.max(0.0)).collect();
        Ok(DualPrices { n, lo, hi, upper, lower })
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Simplex { n } => write!(f, "simplex:{n}"),
            Self::Box { n, lo, hi } => write!(f, "box:{n}:{lo}:{hi}"),
            Self::KSparse { n, k, tau } => write!(f, "ksparse:{n}:{k}:{tau}"),
            Self::L1Ball { n, radius } => write!(f, "l1ball:{n}:{radius}"),
            Self::L2Ball { n, radius } => write!(f, "l2ball:{n}:{radius}"),
        }
    }
}

impl std::str::FromStr for Region {
    type Err = FwError;

    /// Parses the compact `kind:param:...` form produced by `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || FwError::InvalidInput(format!("cannot parse region `{s}`"));
        let int = |i: usize| parts.get(i).and_then(|p| p.parse::<usize>().ok()).ok_or_else(bad);
        let real = |i: usize| parts.get(i).and_then(|p| p.parse::<f64>().ok()).ok_or_else(bad);
        let (region, arity) = match parts[0] {
            "simplex" => (Self::Simplex { n: int(1)? }, 2),
            "box" => (Self::Box { n: int(1)?, lo: real(2)?, hi: real(3)? }, 4),
            "ksparse" => (Self::KSparse { n: int(1)?, k: int(2)?, tau: real(3)? }, 4),
            "l1ball" => (Self::L1Ball { n: int(1)?, radius: real(2)? }, 3),
            "l2ball" => (Self::L2Ball { n: int(1)?, radius: real(2)? }, 3),
            _ => return Err(bad()),
        };
        if parts.len() != arity {
            return Err(bad());
        }
        region.validated()
    }
}

/// Nonnegative multipliers `λ` for the explicit box description `Az ≤ b`.
///
/// At the point where they were produced they satisfy `∇f = −Aᵀλ`, and the
/// Frank-Wolfe gap at any feasible `x` equals the complementarity gap
/// `⟨λ, b − Ax⟩`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualPrices {
    n: usize,
    lo: f64,
    hi: f64,
    upper: Vec<f64>,
    lower: Vec<f64>,
}

impl DualPrices {
    /// Multipliers for the `xᵢ ≤ hi` rows.
    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Multipliers for the `−xᵢ ≤ −lo` rows.
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    /// All `2n` multipliers, upper rows first.
    pub fn lambda(&self) -> Vec<f64> {
        self.upper.iter().chain(&self.lower).copied().collect()
    }

    /// `Aᵀλ`.
    pub fn transpose_apply(&self) -> Vec<f64> {
        self.upper.iter().zip(&self.lower).map(|(u, l)| u - l).collect()
    }

    /// `max |∇f + Aᵀλ|`; zero when the stationarity condition holds.
    pub fn stationarity_residual(&self, gradient: &Vector) -> f64 {
        gradient.iter().zip(self.transpose_apply()).fold(0.0, |m, (g, a)| m.max((g + a).abs()))
    }

    /// `⟨λ, b⟩`.
    pub fn dual_value(&self) -> f64 {
        self.upper.iter().map(|u| u * self.hi).sum::<f64>()
            - self.lower.iter().map(|l| l * self.lo).sum::<f64>()
    }

    /// `⟨λ, b − Ax⟩`.
    pub fn complementarity_gap(&self, x: &Vector) -> f64 {
        assert_eq!(x.dim(), self.n, "dimension mismatch");
        x.iter()
            .enumerate()
            .map(|(i, &xi)| self.upper[i] * (self.hi - xi) + self.lower[i] * (xi - self.lo))
            .sum()
    }
}
