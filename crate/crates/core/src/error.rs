use thiserror::Error;

/// Errors raised by the library. Mathematical "no" answers (a pair that is
/// not a Γ-contraction, a decomposition that does not exist) are reported
/// through result types, not through this enum, unless the operation's
/// contract says otherwise.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("operators do not commute (commutator norm {commutator:e})")]
    NotCommuting { commutator: f64 },

    #[error("matrix is not Hermitian (relative defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("no primary square root: {0}")]
    NoPrimarySqrt(String),

    #[error("Schur iteration did not converge")]
    SchurFailed,

    #[error("simultaneous triangularization failed (off-triangular mass {residual:e})")]
    TriangularizationFailed { residual: f64 },

    #[error("operator equation S - S*P = D_P X D_P not solvable (residual {residual:e})")]
    NotSolvable { residual: f64 },

    #[error("P is not a contraction (norm {norm})")]
    NotContraction { norm: f64 },

    #[error("strict criterion precondition failed: {0}")]
    StrictPreconditionFailed(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("pair is not a certified Γ-contraction: {0}")]
    NotGammaContraction(String),

    #[error("norm bound violated: {0}")]
    NormBoundViolated(String),

    #[error("degree {degree} too high for {blocks} blocks (need degree < blocks)")]
    DegreeTooHigh { degree: usize, blocks: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
