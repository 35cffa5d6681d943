use thiserror::Error;

use crate::scalar::Field;

/// Which projection of a pair failed validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    P,
    Q,
}

impl std::fmt::Display for Which {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Which::P => f.write_str("P"),
            Which::Q => f.write_str("Q"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient dimension must be at least 1")]
    ZeroDimension,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: Field, found: Field },

    #[error("{which} is not idempotent (residual {residual:e})")]
    NotIdempotent { which: Which, residual: f64 },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("subspace is not invariant under the operator (residual {residual:e})")]
    NotInvariant { residual: f64 },

    #[error("basis columns are linearly dependent (rank {rank} < {cols})")]
    DependentBasis { rank: usize, cols: usize },

    #[error("identity violated: {name} (residual {residual:e})")]
    IdentityViolation { name: &'static str, residual: f64 },

    #[error("S = I - M^2 is singular; the inverse form of the commutator identity does not apply")]
    SingularS,

    #[error("restriction to the fitting decomposition failed: {0}")]
    RestrictionFailure(String),

    #[error("n must be odd (got {0})")]
    EvenPower(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("generation exhausted after {attempts} attempts")]
    GenerationExhausted { attempts: usize },

    #[error("eigensolver failed: {0}")]
    EigensolverFailure(String),

    #[error("pair file: {0}")]
    PairFile(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
