use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown built-in algebra {0:?}")]
    UnknownAlgebra(String),
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("restriction is not injective: {0}")]
    NotInjective(String),
    #[error("restriction is not surjective onto the codomain span: {0}")]
    NotSurjective(String),
    #[error("degenerate pairing: {0}")]
    DegeneratePairing(String),
    #[error("decomposition is not direct: {0}")]
    NotDirect(String),
    #[error("pairing degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("unverified deformation retract: {0}")]
    UnverifiedSdr(String),
    #[error("arity {arity} outside the supported range 1..={cap}")]
    ArityOverCap { arity: usize, cap: usize },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
