use thiserror::Error;

/// Errors produced by the folp core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {found}")]
    DimensionMismatch { context: &'static str, expected: usize, found: usize },
    #[error("variable {index} has lower bound {lower} above upper bound {upper}")]
    BoundViolation { index: usize, lower: f64, upper: f64 },
    #[error("non-finite value in {context} at index {index}")]
    NonFiniteData { context: &'static str, index: usize },
    #[error("reduced cost {index} is nonzero while its active bound is infinite")]
    InfiniteProduct { index: usize },
    #[error("primal weight must be positive, got {0}")]
    NonPositiveWeight(f64),
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("matrix has no stored entries")]
    EmptyMatrix,
    #[error("unsupported norm p = {0}")]
    UnsupportedNorm(f64),
    #[error("matrix index ({row}, {col}) out of range for {rows}x{cols}")]
    IndexOutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("problem is primal infeasible: {0}")]
    PrimalInfeasible(String),
    #[error("problem is dual infeasible (primal unbounded): {0}")]
    DualUnbounded(String),
    #[error("iterate became non-finite")]
    NonFiniteIterate,
    #[error("step size fell below {0:e}")]
    StepSizeUnderflow(f64),
    #[error("empty input")]
    EmptyInput,
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("node {0} is isolated; column scaling is undefined")]
    IsolatedNode(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_len(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { context, expected, found })
    }
}
