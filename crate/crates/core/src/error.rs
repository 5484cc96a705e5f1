use thiserror::Error;

use crate::linarith::Var;

pub type Result<T> = std::result::Result<T, Error>;

/// Which configured bound a computation ran into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetKind {
    Cells,
    Atoms,
}

impl std::fmt::Display for BudgetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BudgetKind::Cells => f.write_str("cell"),
            BudgetKind::Atoms => f.write_str("atom"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable {0} has no value")]
    UnassignedVariable(Var),

    #[error("{kind} budget of {limit} exceeded")]
    BudgetExceeded { kind: BudgetKind, limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("sentence has free variable {0}")]
    UnboundVariable(Var),

    #[error("quantifier-free formula expected")]
    NotQuantifierFree,

    #[error("variable {0} is both bound and free")]
    VariableCapture(Var),

    #[error("positive set is not a wedge")]
    NotAWedge,

    #[error("positive set is not a cone")]
    NotACone,

    #[error("element is not positive")]
    NotPositiveElement,

    #[error("set is not a linear subspace")]
    NotASubspace,

    #[error("subspace is not an order ideal")]
    NotAnOrderIdeal,

    #[error("vectors are linearly dependent")]
    LinearlyDependent,

    #[error("postcondition failed: {0}")]
    PostconditionFailed(String),

    #[error("line and integer-translate encodings disagree")]
    EncodingDisagreement,

    #[error("supremum exists but is not a single point")]
    NonUniqueSupremum,

    #[error("dimension {dim} exceeds the configured bound {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("target space is not Archimedean")]
    TargetNotArchimedean,

    #[error("map is not positive")]
    MapNotPositive,

    #[error("kernel of the quotient map is not contained in the kernel of the map")]
    KernelConditionFailed,

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
