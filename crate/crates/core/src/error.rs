use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by state construction, linear algebra and the protocol layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{requested} qubits exceeds the {max}-qubit limit")]
    TooManyQubits { requested: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: max deviation {0:e}")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1")]
    TraceNotOne(f64),
    #[error("matrix is not positive semidefinite: smallest eigenvalue {0:e}")]
    NotPositive(f64),
    #[error("operator is not unitary: max deviation of U^dag U from I is {0:e}")]
    NotUnitary(f64),
    #[error("invalid qubit selection: {0}")]
    InvalidQubits(String),
    #[error("invalid outcome: {0}")]
    InvalidOutcome(String),
    #[error("branch probability {0:e} is below the impossible-branch cutoff; post-measurement state undefined")]
    ImpossibleBranch(f64),
    #[error("invalid coefficient vector: {0}")]
    InvalidCoefficients(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
