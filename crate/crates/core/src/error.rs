use thiserror::Error;

/// Errors raised by the simulator, complexity calculus and estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("bad Q = {0}: the amplitude-quantum constant must be at least 2")]
    BadQ(u64),

    /// Quantization rounded the state to (nearly) nothing: the grid cannot
    /// represent it.
    #[error("state vanished on the grid: quantized squared norm {norm_sq} is below {threshold}")]
    StateVanished { norm_sq: f64, threshold: f64 },

    #[error("dimension mismatch: expected {expected} amplitudes, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state is not normalized: squared norm {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("basis index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: u64, n: u32 },

    #[error("qubit count {n} exceeds the supported limit {max} for this operation")]
    TooLarge { n: u32, max: u32 },

    #[error("bad partition: {0}")]
    BadPartition(String),

    #[error("trajectory too short: {len} records")]
    TooShort { len: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("bad process spec: {0}")]
    BadSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
