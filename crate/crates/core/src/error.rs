use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FwError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("step rule `{0}` has no iteration-only schedule")]
    WrongRule(String),

    #[error("unknown step rule `{0}`")]
    UnknownRule(String),

    #[error("{operation} is not supported for region {region}")]
    UnsupportedRegion { operation: &'static str, region: String },

    #[error("objective does not support {0}")]
    UnsupportedObjective(&'static str),

    #[error("step rule `{0}` requires an objective declared convex")]
    NonConvexObjective(String),

    #[error(
        "smoothness estimate not accepted after {escalations} escalations (last estimate {last_estimate:e})"
    )]
    NonAcceptance { escalations: usize, last_estimate: f64 },

    #[error("starting point is infeasible (constraint violation {violation:e})")]
    InfeasibleStart { violation: f64 },

    #[error("iterate {t} failed the feasibility audit (constraint violation {violation:e})")]
    FeasibilityLost { t: usize, violation: f64 },
}
