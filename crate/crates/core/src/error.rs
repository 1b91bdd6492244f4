use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: max |H - H^dag| = {deviation:.3e} (tolerance {tolerance:.1e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not unitary: max |U^dag U - 1| = {deviation:.3e} (tolerance {tolerance:.1e})")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry in {context}")]
    NonFinite { context: &'static str },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("grid index {index} out of range (grid has {len} points)")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("time grid too short: {len} points, need at least {min}")]
    GridTooShort { len: usize, min: usize },

    #[error("time grids do not match")]
    GridMismatch,

    #[error("degeneracy structure changed between t = {t_prev} and t = {t_next}")]
    DegeneracyCrossing { t_prev: f64, t_next: f64 },

    #[error("integration produced non-finite values after t = {last_valid_time}")]
    IntegrationFailure { last_valid_time: f64 },

    #[error("case `{case}` is incompatible with the frame's block structure: {reason}")]
    IncompatibleCase { case: String, reason: String },

    #[error("singular quantity: {0}")]
    Singular(String),

    #[error("inconsistent result: {0}")]
    Inconsistent(String),

    #[error("eigensolver failed to converge")]
    NoConvergence,
}

impl Error {
    pub(crate) fn param(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { field: field.into(), reason: reason.into() }
    }
}
