use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("phase-space dimension must be even and positive, got {0}")]
    BadDimension(usize),
    #[error("variable index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("empty factor list")]
    EmptyProduct,
    #[error("symbol is not Hermitian: {0}")]
    NonHermitian(String),
    #[error("truncation order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("derivative of order {requested} unavailable (max {available})")]
    DerivativeOrder { requested: usize, available: usize },
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
    #[error("covariance is not positive definite")]
    NotPositiveDefinite,
    #[error("constraint basis violated at ({a}, {b}): residual {residual}")]
    BasisViolation { a: usize, b: usize, residual: String },
    #[error("constraint bracket matrix is degenerate")]
    DegenerateConstraints,
    #[error("projection series did not terminate within max_k = {0}")]
    NonTerminating(usize),
    #[error("Hamiltonian depends on coordinate q{0}")]
    DependsOnCoordinate(usize),
    #[error("no representation found: {0}")]
    NoRepresentation(String),
    #[error("singular map: {0}")]
    Singular(String),
}
