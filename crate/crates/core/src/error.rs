use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("qubit index {index} out of range for a {num_qubits}-qubit system")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("duplicate target qubit {0}")]
    DuplicateQubit(usize),

    #[error("qubit list must not be empty")]
    EmptyQubitList,

    #[error("system of {0} qubits exceeds the supported maximum")]
    TooManyQubits(usize),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("basis vectors are not orthonormal (deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("forced outcome {outcome} has vanishing probability {probability:e}")]
    ZeroProbabilityOutcome { outcome: u8, probability: f64 },

    #[error("post-selection probability {0:e} is too small")]
    ImpossiblePostSelection(f64),

    #[error("invalid channel spec: {0}")]
    InvalidChannel(String),

    #[error("invalid target state: {0}")]
    InvalidTarget(String),

    #[error("decoherence rate {0} outside [0, 1]")]
    EtaOutOfRange(f64),

    #[error("Kraus operators are not complete: max |Σ K†K - I| = {0:e}")]
    IncompleteKraus(f64),

    #[error("noise grouping does not partition the {num_qubits} qubits: {reason}")]
    GroupingMismatch { num_qubits: usize, reason: String },

    #[error("protocol fails on this branch: {0}")]
    ProtocolFails(String),

    #[error("outcome policy: {0}")]
    Policy(String),

    #[error("sweep grid has no points")]
    EmptyGrid,

    #[error("parse error: {0}")]
    Parse(String),
}
