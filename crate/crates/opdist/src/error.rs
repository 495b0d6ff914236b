//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry buffer of length {found} does not fill a {rows}x{cols} matrix")]
    BufferLength {
        rows: usize,
        cols: usize,
        found: usize,
    },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is not Hermitian: max |a - a\u{2020}| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue = {min_eigenvalue:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("trace must equal 1: got {trace}")]
    TraceNotOne { trace: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("dimension must be at least 2: got {dim}")]
    DimensionTooSmall { dim: usize },

    #[error(
        "dimension {dim} is not prime; complete measurement sets are built for prime \
         dimensions only (prime powers would need the Galois-field construction, \
         which is not implemented)"
    )]
    UnsupportedDimension { dim: usize },

    #[error("matrix is not unitary: max |u\u{2020}u - 1| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error(
        "projectors do not form an orthonormal resolution of the identity \
         (deviation = {deviation:.3e})"
    )]
    InvalidMeasurementBasis { deviation: f64 },

    #[error("state is not pure: purity = {purity}")]
    NotPure { purity: f64 },

    #[error("Bloch coordinate is not real: imaginary residue = {residue:.3e}")]
    ImaginaryResidue { residue: f64 },

    #[error("probability entry out of range: {value}")]
    InvalidProbability { value: f64 },

    #[error("probabilities must sum to 1: got {sum}")]
    ProbabilityNotNormalized { sum: f64 },

    #[error("normalization factor must be positive: got {value}")]
    NonPositiveNormalization { value: f64 },

    #[error("operation requires a qubit (dimension 2): got {dim}")]
    NotAQubit { dim: usize },

    #[error("state vector has zero norm")]
    ZeroVector,
}
