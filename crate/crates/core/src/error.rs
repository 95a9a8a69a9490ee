use alloc::string::String;

/// Errors raised by the core crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("qubit index {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("gate acts twice on qubit {0}")]
    RepeatedQubit(usize),
    #[error("gate {kind} expects an angle: {expected}, got one: {got}")]
    AngleMismatch {
        kind: &'static str,
        expected: bool,
        got: bool,
    },
    #[error("parameter slot {slot} is not contiguous with the {n_params} existing slots")]
    NonContiguousSlot { slot: usize, n_params: usize },
    #[error("expected {expected} parameters, got {got}")]
    ParamLength { expected: usize, got: usize },
    #[error("parameter {index} does not exist (circuit has {n_params})")]
    UnknownParameter { index: usize, n_params: usize },
    #[error("gate {0} is not of the form exp(-i theta G / 2) and cannot be shifted")]
    NonShiftable(&'static str),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid probability distribution: {0}")]
    InvalidPmf(String),
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("{name} = {value} lies outside [0, 1]")]
    ProbabilityRange { name: &'static str, value: f64 },
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("{n_qubits} qubits exceeds the {max}-qubit limit of the {backend} backend")]
    TooManyQubits {
        n_qubits: usize,
        max: usize,
        backend: &'static str,
    },
    #[error("copula circuits need an even number of at least 2 qubits, got {0}")]
    OddWidth(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("coordinate {value} of point {index} lies outside [0, 1]")]
    CoordinateRange { index: usize, value: f64 },
    #[error("dimension {0} has zero range")]
    ZeroRange(usize),
    #[error("non-finite value encountered: {0}")]
    NonFinite(&'static str),
    #[error("backend {backend} cannot model {channel}")]
    IncompatibleBackend {
        backend: &'static str,
        channel: &'static str,
    },
    #[error("series misaligned: {0}")]
    Misaligned(String),
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
