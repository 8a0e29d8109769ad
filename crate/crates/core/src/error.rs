use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u32),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("no potential given")]
    NoPotential,
    #[error("dimension did not stabilize below degree bound {0}")]
    NotStabilized(usize),
    #[error("field too small to split: {0}")]
    FieldTooSmall(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("algebra is not self-injective")]
    NotSelfInjective,
    #[error("endomorphism algebra is not self-injective")]
    EndNotSelfInjective,
    #[error("empty generator list")]
    EmptyGenerator,
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("input square does not commute")]
    NonCommutingSquare,
    #[error("sequence is not exact")]
    NotExact,
    #[error("not an idempotent morphism of sequences")]
    NotIdempotent,
    #[error("coresolution did not terminate in {0} steps")]
    CoresolutionTooLong(usize),
    #[error("invalid unit family: {0}")]
    InvalidUnit(String),
    #[error("invalid theta family: {0}")]
    InvalidTheta(String),
    #[error("no completion with member cone found")]
    NoMemberCone,
    #[error("scenario error: {0}")]
    Scenario(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
