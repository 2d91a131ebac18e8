use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: |H[{row},{col}] - conj(H[{col},{row}])| = {deviation:e}")]
    NonHermitian { row: usize, col: usize, deviation: f64 },

    #[error("matrix is not unitary: max |(U U^dagger - I)[i,j]| = {deviation:e}")]
    NonUnitary { deviation: f64 },

    #[error("state is not unit norm: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("dimension must be positive")]
    ZeroDimension,

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("wire {wire} out of range [1, {qubits}]")]
    WireOutOfRange { wire: usize, qubits: usize },

    #[error("grid index {index} out of range for resolution {grid}")]
    GridOutOfRange { index: u32, grid: u32 },

    #[error("malformed encoding at line {line}, column {column}: {message}")]
    MalformedEncoding {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("input contains non-bit symbol {symbol:?} at position {position}")]
    BadSymbol { symbol: char, position: usize },

    #[error("input length {got} does not match relation length {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("accuracy eta = {0} must lie in (1/2, 1]")]
    BadAccuracy(f64),

    #[error("accuracy bound epsilon = {0} must lie in [0, 1)")]
    BadEpsilon(f64),

    #[error("ground state is degenerate: spectral gap {gap:e} <= tolerance {tolerance:e}")]
    DegenerateGroundState { gap: f64, tolerance: f64 },

    #[error("time t = {t} outside [0, T] with T = {total}")]
    BadTime { t: f64, total: f64 },

    #[error("minimum sampled spectral gap {0:e} is zero; the adiabatic bound diverges")]
    ZeroGap(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Fourier resolution k = {0} is not a power of two")]
    BadResolution(usize),

    #[error("estimated angle {0} is too small to amplify")]
    ZeroAngle(f64),

    #[error("pool of {size} machines exceeds the cap of {cap}")]
    PoolTooLarge { size: u128, cap: usize },

    #[error("pool is empty")]
    EmptyPool,
}
