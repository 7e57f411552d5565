use crate::state::{QubitId, Role};

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("qubit id {0} registered twice")]
    DuplicateQubit(QubitId),
    #[error("register must contain at least one qubit")]
    EmptyRegister,
    #[error("register of {requested} qubits exceeds the cap of {max}")]
    RegisterTooLarge { requested: usize, max: usize },
    #[error("qubit {0} is not part of the register")]
    UnknownQubit(QubitId),
    #[error("{gate} takes {expected} operand(s), got {got}")]
    ArityMismatch {
        gate: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("qubit {0} used twice in one operation")]
    RepeatedOperand(QubitId),
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("amplitudes are not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("subset of qubits to keep is empty")]
    EmptySubset,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("qubit {qubit} must be a {expected:?}")]
    RoleMismatch { qubit: QubitId, expected: Role },
    #[error("{name} = {value} is not a probability in [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },
    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{0} is zero, the waiting time diverges")]
    Divergence(&'static str),
    #[error("{what} = {value} out of range (max {max})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        max: usize,
    },
    #[error("LOBM must resolve two distinct Bell outcomes")]
    IndistinctOutcomes,
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(&'static str),
}
