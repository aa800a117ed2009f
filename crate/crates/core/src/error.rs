use thiserror::Error;

/// Errors produced by the operator toolkit.
///
/// `Precondition` and `OutsideNeighborhood` are deliberate non-verdicts: a
/// certificate that cannot be evaluated is distinguished from one that fails.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("svd did not converge within the sweep budget (off-diagonal residual {residual:.3e})")]
    SvdNoConvergence { residual: f64 },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("certificate skipped: {0}")]
    Skipped(String),

    #[error("outside the section neighborhood: {0}")]
    OutsideNeighborhood(String),

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
