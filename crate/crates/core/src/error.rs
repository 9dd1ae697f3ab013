use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count must be at least 1")]
    EmptyRegister,

    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("two-qubit gate applied to repeated qubit {0}")]
    RepeatedQubit(usize),

    #[error("Pauli operator size mismatch: expected {expected} qubits, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("Pauli operator has imaginary phase and is not an observable")]
    ImaginaryPhase,

    #[error("gate {0} is not a Clifford operation")]
    NonClifford(String),

    #[error("lattice dimensions must be even, got {rows}x{cols}")]
    OddDimension { rows: usize, cols: usize },

    #[error("no consistent defect stabilizer exists: {0}")]
    NoSolution(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("condition reads clbit {0} before it was written")]
    UnwrittenClbit(usize),

    #[error("syndrome is heralded (odd anyon parity) and cannot be decoded")]
    Heralded,

    #[error("invalid preparation strategy: {0}")]
    InvalidStrategy(String),

    #[error("invalid noise specification: {0}")]
    InvalidNoise(String),

    #[error("transition matrix is singular")]
    SingularMatrix,

    #[error("at least two shots per setting are needed, got {0}")]
    TooFewShots(usize),

    #[error("measurement plan does not cover stabilizer {0}")]
    PlanGap(String),

    #[error("conflicting measurement bases on qubit {0}")]
    BasisConflict(usize),

    #[error("need {needed} ancilla qubits, only {available} available")]
    AncillaShortage { needed: usize, available: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("json error: {0}")]
    Json(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
