use thiserror::Error;

/// Errors raised by the library. Every variant names the invariant that was
/// violated so callers (and the CLI) can report it verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A - A^H| entry = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue = {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("unsupported local dimension {0} (only 2 and 3 are supported)")]
    UnsupportedDimension(usize),

    #[error("index {index} out of range {min}..={max}")]
    IndexOutOfRange {
        index: usize,
        min: usize,
        max: usize,
    },

    #[error("state is not normalized (norm^2 = {norm_sq:.15})")]
    InvalidNormalization { norm_sq: f64 },

    #[error("trace must be 1 (found {trace:.15})")]
    InvalidTrace { trace: f64 },

    #[error("parameter `{name}` out of range: {value}")]
    ParameterOutOfRange { name: &'static str, value: f64 },

    #[error("isometry has {found} columns but the state has rank {rank}")]
    RankMismatch { rank: usize, found: usize },

    #[error("columns are not orthonormal (max |V^H V - I| entry = {deviation:.3e})")]
    NotIsometry { deviation: f64 },

    #[error("negative coefficient {value} in Schmidt vector")]
    NegativeCoefficient { value: f64 },

    #[error("malformed state file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
