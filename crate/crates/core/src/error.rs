use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("entry count {len} does not match shape {rows}x{cols}")]
    Shape { rows: usize, cols: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("register must hold 1 to {max} qubits, got {got}")]
    RegisterSize { got: usize, max: usize },

    #[error("duplicate qubit label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown qubit label `{0}`")]
    UnknownLabel(String),

    #[error("invalid bipartite cut: {0}")]
    InvalidCut(String),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("not a valid density matrix: {0}")]
    NotDensity(String),

    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("outcome has zero probability")]
    ZeroProbability,

    #[error("analytic noisy swap requires identical input pairs")]
    MismatchedPairs,

    #[error("standard teleportation requires a maximally entangled channel (a = {a}, b = {b})")]
    NonMaximalChannel { a: f64, b: f64 },
}
