use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("dimension mismatch: operator on {expected} qubits, state on {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{n} qubits exceeds the dense limit of {limit}")]
    TooManyQubits { n: usize, limit: usize },

    #[error("observable is not Hermitian (max imaginary coefficient {0:.3e})")]
    NonHermitian(f64),

    #[error("invalid Pauli label {0:?}")]
    InvalidLabel(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("SCF failed to converge after {0} cycles")]
    ScfNotConverged(usize),

    #[error("index {index} out of range for {len} modes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("symmetry violated: {0}")]
    SymmetryViolated(String),

    #[error("invalid noise factor {0}: must be odd and positive")]
    InvalidNoiseFactor(i64),

    #[error("readout calibration is singular (qubit {qubit}, det {det:.3e})")]
    SingularCalibration { qubit: usize, det: f64 },

    #[error("readout correction is ill-conditioned (condition number {0:.3e})")]
    IllConditioned(f64),

    #[error("invalid probability {name} = {value}")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("generator is not anti-Hermitian")]
    NotAntiHermitian,

    #[error("encoding mismatch: {0}")]
    EncodingMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
