use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("strand count mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },

    #[error("generator index {index} out of range for {strands} strands")]
    GeneratorOutOfRange { index: i64, strands: usize },

    #[error("invalid strand count {0}")]
    InvalidStrands(usize),

    #[error("cannot include a braid on {from} strands into {to} strands")]
    InvalidInclusion { from: usize, to: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("evaluation point t = 0 is not allowed")]
    ZeroEvaluationPoint,

    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("resource cap exceeded: {what} limit is {cap}")]
    ResourceCap { what: &'static str, cap: u64 },

    #[error("internal consistency failure: {0}")]
    Inconsistency(String),

    #[error("Newton iteration failed: {0}")]
    NewtonFailed(String),

    #[error("orbit closes with period {found}, not the requested period {requested}")]
    NonMinimalPeriod { requested: usize, found: usize },

    #[error("no period-doubling crossing in the bracket")]
    NoCrossing,

    #[error("continuation failed at path parameter {at}: {reason}")]
    ContinuationFailed { at: f64, reason: String },

    #[error("projection coincidence unresolved after {retries} rotations")]
    UnresolvedCoincidence { retries: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error("incomparable reports: {0}")]
    Incomparable(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Coarse category used for exit codes and the report error ledger.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::ResourceCap { .. } => ErrorKind::Resource,
            Error::NewtonFailed(_)
            | Error::NonMinimalPeriod { .. }
            | Error::NoCrossing
            | Error::ContinuationFailed { .. }
            | Error::UnresolvedCoincidence { .. } => ErrorKind::Numerical,
            Error::Config(_)
            | Error::InvalidModulus(_)
            | Error::NotPrime(_)
            | Error::ZeroEvaluationPoint
            | Error::Parse(_)
            | Error::GeneratorOutOfRange { .. }
            | Error::InvalidStrands(_)
            | Error::StrandMismatch { .. }
            | Error::Incomparable(_) => ErrorKind::Config,
            _ => ErrorKind::Other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Numerical,
    Resource,
    Other,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
