use thiserror::Error;

pub type Result<T> = std::result::Result<T, WalkError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error("matrix is empty")]
    Empty,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |A_jk - conj(A_kj)| = {max_asymmetry:e}")]
    NotHermitian { max_asymmetry: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("eigensolver did not reach tolerance (residual {residual:e})")]
    ConvergenceFailure { residual: f64 },

    #[error("nonzero pattern is reducible into {} components", components.len())]
    ReducibleMatrix { components: Vec<Vec<usize>> },

    #[error("matrix has a negative or non-real entry at ({row}, {col})")]
    NotNonnegative { row: usize, col: usize },

    #[error("negative diagonal entry H[{index}][{index}] = {value} and shifting is disabled")]
    NegativeDiagonal { index: usize, value: f64 },

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("epsilon must lie in (0, 1], got {0}")]
    InvalidEpsilon(f64),

    #[error("too few walk steps: epsilon = {epsilon} exceeds 1")]
    InsufficientSteps { epsilon: f64 },

    #[error("tolerance must lie in (0, 1), got {0}")]
    InvalidTolerance(f64),

    #[error("malformed tree: {0}")]
    MalformedTree(String),

    #[error("star has no nonzero weights")]
    ZeroStar,

    #[error("instance too small: N = {n} (need N >= {min})")]
    TooSmall { n: usize, min: usize },

    #[error("full-graph enumeration infeasible for N = {n} (max {max})")]
    Infeasible { n: usize, max: usize },

    #[error("{0} is not an odd prime")]
    NotPrime(u64),

    #[error("prime {0} is not congruent to 1 mod 4")]
    BadPrime(u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for WalkError {
    fn from(e: std::io::Error) -> Self {
        WalkError::Io(e.to_string())
    }
}
