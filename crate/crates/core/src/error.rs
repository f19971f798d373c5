use thiserror::Error;

use crate::pipeline::InfeasibleReport;

/// Errors raised across the crate.
///
/// Variants mirror the failure contracts of the individual operations; the
/// CLI maps them onto exit codes (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("points are not in general position ({0})")]
    GeneralPositionViolation(String),

    #[error("index {index} out of range 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("index {0} collides with the hyperplane index set")]
    IndexCollision(usize),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    #[error("sequence is not orientation-homogeneous")]
    NotHomogeneous,

    #[error("tuple arity {0} is too small (need D >= 3)")]
    ArityTooSmall(usize),

    #[error("epsilon {0} out of range")]
    EpsilonOutOfRange(String),

    #[error("ambient mismatch: expected t = {expected}, found {found}")]
    AmbientMismatch { expected: usize, found: usize },

    #[error("enumeration cap exceeded: {what} = {value} > cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("part sizes differ by {0} (at most one allowed)")]
    UnbalancedInput(usize),

    #[error("no admissible partition found: {0}")]
    NoPartitionFound(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("guarantee-mode parameters are infeasible for this input")]
    InfeasibleParams(Box<InfeasibleReport>),

    #[error("perturbation did not stabilize after {halvings} halvings: {detail}")]
    NoStabilization { halvings: u32, detail: String },

    #[error("approximant has zero total weight")]
    EmptyApproximant,

    #[error("points are not in convex position in the given order")]
    NotConvexPosition,

    #[error("operation requires planar input (d = 2), got d = {0}")]
    NotPlanar(usize),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 2,
            Error::InfeasibleParams(_) => 3,
            Error::InternalInvariantViolation(_) => 4,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
