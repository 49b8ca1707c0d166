use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: |a[{row}][{col}] - conj(a[{col}][{row}])| = {deviation:e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal residual {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("qubit index {0} listed more than once")]
    DuplicateQubit(usize),

    #[error("basis label {label} out of range for {n_qubits} qubits")]
    LabelOutOfRange { label: usize, n_qubits: usize },

    #[error("trace deviates from one by {0:e}")]
    TraceDeviation(f64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("temperature must be non-negative, got {0}")]
    NegativeTemperature(f64),

    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),

    #[error("state is not of X form (off-pattern residual {residual:e})")]
    NotXForm { residual: f64 },

    #[error("X-position coherence has imaginary part {0:e}")]
    ComplexCoherence(f64),

    #[error("not a valid density matrix: eigenvalue {0:e}")]
    InvalidDensityMatrix(f64),

    #[error("no transition found in [{lo}, {hi}]")]
    NoTransition { lo: f64, hi: f64 },

    #[error("grid point {index} ({coordinates}) failed: {source}")]
    GridPoint {
        index: usize,
        coordinates: String,
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
