use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} exceeds cap: {count} > {cap}")]
    CapExceeded {
        what: &'static str,
        count: usize,
        cap: usize,
    },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("element {0} is not a member of the group")]
    NotInGroup(String),

    #[error("subgroups are not almost conjugate")]
    NotAlmostConjugate,

    #[error("no invertible intertwiner found; seeds tried: {seeds:?}")]
    NoInvertibleFound { seeds: Vec<u64> },

    #[error("Gram matrix is ill-conditioned: eigenvalues in [{min:e}, {max:e}]")]
    IllConditioned { min: f64, max: f64 },

    #[error("no phase on edge {0}")]
    MissingPhase(usize),

    #[error("no potential value at vertex {0}")]
    MissingPotential(usize),

    #[error("matrix is not Hermitian at entry ({row}, {col})")]
    NonHermitian { row: usize, col: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("subgroup is not contained in the intermediate group")]
    SubgroupNotContained,

    #[error("conjugation by tau does not carry gamma1 onto gamma2")]
    NotNormalizing,

    #[error("tensor power must be positive, got {0}")]
    BadK(i64),

    #[error("{field} is not invariant under the group: orbit {orbit:?} carries values {values:?}")]
    NotInvariant {
        field: &'static str,
        orbit: Vec<usize>,
        values: Vec<f64>,
    },

    #[error("validation failed at `{field}`: {reason}")]
    ValidationFailed { field: String, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::ValidationFailed {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
