use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },
    #[error("matrix has a negative eigenvalue {eigenvalue:.3e}")]
    NegativeEigenvalue { eigenvalue: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid Bell-diagonal weights: {0}")]
    InvalidWeights(String),
    #[error("value {value} outside the range {range}")]
    OutOfRange { value: f64, range: &'static str },
    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("state must have exactly two subsystems, got {0}")]
    NotBipartite(usize),
    #[error("state must be a two-qubit state, got dims {0:?}")]
    NotTwoQubits(Vec<usize>),
    #[error("POVM elements do not sum to identity (deviation {deviation:.3e})")]
    IncompletePovm { deviation: f64 },
    #[error("dimensions {0:?} are outside the supported solver range")]
    DimensionTooLarge(Vec<usize>),
    #[error("objective is not finite at the initial point")]
    SupportFailure,
    #[error("channel violates completeness (deviation {deviation:.3e})")]
    InvalidChannel { deviation: f64 },
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("invalid product ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    /// Whether the error concerns malformed input text rather than its content.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
